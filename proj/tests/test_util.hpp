// Copyright 2026 The spfilter Authors
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

#include "spf/filters.hpp"

#include <Eigen/Dense>

namespace spf::test {

template <class A, class B>
double max_abs(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs(const FilterState& a, const FilterState& b) {
    return std::max({max_abs(a.rho11, b.rho11), max_abs(a.rho10, b.rho10), max_abs(a.rho00, b.rho00)});
}

inline bool bitwise_equal(const FilterState& a, const FilterState& b) {
    return a.rho11 == b.rho11 && a.rho10 == b.rho10 && a.rho00 == b.rho00;
}

inline Op2 op(cplx a, cplx b, cplx c, cplx d) {
    Op2 m;
    m << a, b, c, d;
    return m;
}

}  // namespace spf::test
