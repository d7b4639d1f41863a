// Copyright 2026 The lqs Authors
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

#include "lqs/core/ast.hpp"

namespace lqs {

/// Expands blocks, do, proc, call and `=>` into core constructors.
///
///   {x <- m1; m2}   bnd (cmd m1) as x in m2
///   {m1; m2}        {_ <- m1; m2}
///   do m            {x <- m; ret x}
///   proc (x:t) m    fun (x:t) cmd m
///   call e1(e2)     bnd e1(e2) as x in ret x
///   call e          call e(())
///   t1 => t2        t1 -> cmd(t2)
///
/// Terms without sugar are returned as the same pointer.
TypePtr desugar(const TypePtr& t);
ExprPtr desugar(const ExprPtr& e);
CmdPtr desugar(const CmdPtr& m);
Term desugar(const Term& t);

/// True when no derived form occurs anywhere in the term.
bool is_core(const ExprPtr& e);
bool is_core(const CmdPtr& m);

}  // namespace lqs
