/*
 * Copyright 2026 The spikedel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include "spikedel/common.hpp"
#include "spikedel/connectivity/census.hpp"
#include "spikedel/connectivity/dump.hpp"
#include "spikedel/connectivity/network.hpp"
#include "spikedel/connectivity/synapse.hpp"
#include "spikedel/core/neuron.hpp"
#include "spikedel/core/ring_buffer.hpp"
#include "spikedel/delivery/algorithms.hpp"
#include "spikedel/delivery/instrumentation.hpp"
#include "spikedel/delivery/strategy.hpp"
#include "spikedel/exchange/exchange.hpp"
#include "spikedel/harness/config.hpp"
#include "spikedel/harness/results.hpp"
#include "spikedel/harness/simulation.hpp"
#include "spikedel/harness/stopwatch.hpp"
#include "spikedel/harness/sweep.hpp"
#include "spikedel/oracle/buffer_image.hpp"
#include "spikedel/oracle/exact_weights.hpp"
#include "spikedel/oracle/naive.hpp"
