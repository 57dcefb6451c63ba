// Copyright 2026 The qpd Authors
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

// Compares the OpenMP kernels against their serial reference implementations
// on representative workloads and verifies that both produce identical
// results.

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qpd/bounds.hpp"
#include "qpd/dynamics.hpp"
#include "qpd/rng.hpp"

using namespace qpd;

namespace {

template <typename F>
double timed(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   |diff| %g\n",
              name, serial, parallel, serial / parallel, diff);
}

}  // namespace

int main() {
  std::printf("qpd benchmark: OpenMP kernels vs serial references\n\n");

  {
    Rng rng(1);
    const Body body{EllipsoidBody(Space::Position, rng.spd(4, 0.4, 2.5), 1.0)};
    const BodyOracle oracle = oracle_for(body);
    const long long samples = 20000000;
    McEstimate par, ser;
    const double tp = timed([&] { par = mc_volume(oracle, 42, samples); });
    const double ts = timed([&] { ser = mc_volume_serial(oracle, 42, samples); });
    report("mc_volume (2e7, dim 4)", ts, tp,
           std::abs(par.estimate - ser.estimate) + std::abs(par.hits - ser.hits));
  }

  {
    const CovState phi0(1.0, 0.5 * Matrix::identity(4));
    const Body disk{EllipsoidBody(Space::Position, Matrix::identity(2), 1.0)};
    const long long samples = 1 << 22;
    ConcentrationEstimate par, ser;
    const double tp =
        timed([&] { par = concentration(phi0, disk, Space::Position, 7, samples); });
    const double ts =
        timed([&] { ser = concentration_serial(phi0, disk, Space::Position, 7, samples); });
    report("concentration (2^22, n=2)", ts, tp,
           std::abs(par.mass_inside - ser.mass_inside));
  }

  {
    const CovState state = random_cov_state(99, 3, 1.0, StateKind::Mixed);
    Rng rng(5);
    const QuadHamiltonian h(rng.symmetric(6, -0.25, 0.25));
    Vec grid;
    for (int i = 0; i < 400; ++i) grid.push_back(0.025 * i);
    std::vector<VolumePoint> par, ser;
    const double tp = timed([&] { par = projection_volume_series(state, h, grid); });
    // Serial reference: evaluate the same grid point-by-point.
    double diff = 0.0;
    const double ts = timed([&] {
      for (size_t i = 0; i < grid.size(); ++i) {
        const auto one = projection_volume_series(state, h, {grid[i]});
        diff = std::max({diff, std::abs(one[0].vol_x - par[i].vol_x),
                         std::abs(one[0].vol_p - par[i].vol_p)});
      }
    });
    report("volume series (400 points)", ts, tp, diff);
  }

  return 0;
}
