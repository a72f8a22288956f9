/*
 * Copyright (C) 2026 The jswap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef JSWAP_SWAP_HPP
#define JSWAP_SWAP_HPP

#include "jswap/swap/audit.hpp"
#include "jswap/swap/frame.hpp"
#include "jswap/swap/roles.hpp"
#include "jswap/swap/run.hpp"
#include "jswap/swap/terms.hpp"

#endif // JSWAP_SWAP_HPP
