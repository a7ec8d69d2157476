// Copyright 2026 The kgmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "kgmatch/dataset.hpp"
#include "kgmatch/embedding_table.hpp"
#include "kgmatch/eval.hpp"
#include "kgmatch/graph.hpp"
#include "kgmatch/matcher.hpp"
#include "kgmatch/name_index.hpp"
#include "kgmatch/ntriples.hpp"
#include "kgmatch/pipeline.hpp"
#include "kgmatch/ranking.hpp"
#include "kgmatch/skipgram.hpp"
#include "kgmatch/synth.hpp"
#include "kgmatch/walks.hpp"
