// SPDX-License-Identifier: Apache-2.0
//
// beamtrain - near-field beam training and sparse channel reconstruction
// Copyright (C) 2026 beamtrain project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "beamtrain/metrics.hpp"
#include "beamtrain/rng.hpp"

using namespace beamtrain;

namespace {
Eigen::VectorXcd random_vec(Rng& rng, int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v[i] = rng.complex_normal();
    return v;
}
} // namespace

TEST_CASE("l2 error basics") {
    Rng rng(41);
    const Eigen::VectorXcd h = random_vec(rng, 16);

    REQUIRE(l2_error(h, h) == 0.0);
    REQUIRE(l2_error(h, 2.0 * h) == 0.0);
    REQUIRE(l2_error(h, -h) == Catch::Approx(2.0).epsilon(1e-15));
    REQUIRE_THROWS_AS(l2_error(h, Eigen::VectorXcd::Zero(16)), std::invalid_argument);
    REQUIRE_THROWS_AS(l2_error(Eigen::VectorXcd::Zero(16), h), std::invalid_argument);
}

TEST_CASE("l2 error is symmetric and scale invariant") {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::VectorXcd a = random_vec(rng, 12);
        const Eigen::VectorXcd b = random_vec(rng, 12);
        REQUIRE(l2_error(a, b) == l2_error(b, a));
        REQUIRE(l2_error(3.7 * a, b) == Catch::Approx(l2_error(a, b)).epsilon(1e-12));
        REQUIRE(l2_error(a, 0.02 * b) == Catch::Approx(l2_error(a, b)).epsilon(1e-12));
        REQUIRE(l2_error(a, b) >= 0.0);
        REQUIRE(l2_error(a, b) <= 2.0 + 1e-15);
    }
}

TEST_CASE("phase-aligned error removes a global rotation") {
    Rng rng(43);
    const Eigen::VectorXcd h = random_vec(rng, 10);
    const std::complex<double> rot = std::polar(1.0, 1.234);
    REQUIRE(l2_error_phase_aligned(h, rot * h) < 1e-7);
    REQUIRE(l2_error(h, rot * h) > 0.5); // unaligned metric sees the rotation
}

TEST_CASE("achievable rate basics") {
    Rng rng(44);
    const Eigen::VectorXcd h = random_vec(rng, 16);
    const double sigma_sq = 0.05;

    SECTION("true channel meets the perfect-CSI bound") {
        REQUIRE(achievable_rate(h, h, sigma_sq) ==
                Catch::Approx(perfect_csi_rate(h, sigma_sq)).epsilon(1e-12));
    }
    SECTION("orthogonal estimate yields zero rate") {
        Eigen::VectorXcd h0 = Eigen::VectorXcd::Zero(4);
        Eigen::VectorXcd h1 = Eigen::VectorXcd::Zero(4);
        h0[0] = 1.0;
        h1[1] = 1.0;
        REQUIRE(achievable_rate(h0, h1, sigma_sq) == 0.0);
    }
    SECTION("global phase on the estimate changes nothing") {
        const std::complex<double> rot = std::polar(1.0, -2.2);
        REQUIRE(achievable_rate(h, rot * h, sigma_sq) ==
                Catch::Approx(achievable_rate(h, h, sigma_sq)).epsilon(1e-12));
    }
    SECTION("complex scaling of the estimate changes nothing") {
        const std::complex<double> scale(-3.0, 0.4);
        const Eigen::VectorXcd g = random_vec(rng, 16);
        REQUIRE(achievable_rate(h, scale * g, sigma_sq) ==
                Catch::Approx(achievable_rate(h, g, sigma_sq)).epsilon(1e-12));
    }
    SECTION("zero estimate and zero noise are rejected") {
        REQUIRE_THROWS_AS(achievable_rate(h, Eigen::VectorXcd::Zero(16), sigma_sq),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(achievable_rate(h, h, 0.0), std::invalid_argument);
    }
}

TEST_CASE("every estimate stays below the perfect-CSI bound") {
    Rng rng(45);
    const double sigma_sq = 0.01;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXcd h = random_vec(rng, 20);
        const Eigen::VectorXcd guess = random_vec(rng, 20);
        REQUIRE(achievable_rate(h, guess, sigma_sq) <=
                perfect_csi_rate(h, sigma_sq) + 1e-12);
    }
}

TEST_CASE("subspace rate and error forms match the vector forms") {
    Rng rng(46);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::VectorXcd h = random_vec(rng, 24);
        const Eigen::VectorXcd est = random_vec(rng, 24);
        const double sigma_sq = 0.2;
        const std::complex<double> inner = h.dot(est);
        REQUIRE(achievable_rate_from_inner(inner, est.squaredNorm(), sigma_sq) ==
                Catch::Approx(achievable_rate(h, est, sigma_sq)).epsilon(1e-12));
        REQUIRE(l2_error_from_inner(inner, h.norm(), est.norm()) ==
                Catch::Approx(l2_error(h, est)).epsilon(1e-9).margin(1e-9));
    }
}

TEST_CASE("energy fraction count") {
    Eigen::VectorXd profile(4);
    profile << 0.5, 0.3, 0.15, 0.05;
    REQUIRE(count_for_energy_fraction(profile, 0.5) == 1);
    REQUIRE(count_for_energy_fraction(profile, 0.8) == 2);
    REQUIRE(count_for_energy_fraction(profile, 0.95) == 3);
    REQUIRE(count_for_energy_fraction(profile, 1.0) == 4);
    REQUIRE(count_for_energy_fraction(Eigen::VectorXd::Zero(3), 0.9) == 0);
    REQUIRE_THROWS_AS(count_for_energy_fraction(profile, 0.0), std::invalid_argument);
}

TEST_CASE("minimum overhead search") {
    SECTION("fraction zero is satisfied by the first overhead") {
        const std::vector<double> rates{0.1, 0.2, 0.3};
        REQUIRE(min_overhead_for_fraction(rates, 10.0, 0.0, 3) == 1);
    }
    SECTION("threshold scan") {
        const std::vector<double> rates{1.0, 5.0, 9.0, 9.9};
        REQUIRE(min_overhead_for_fraction(rates, 10.0, 0.5, 4) == 2);
        REQUIRE(min_overhead_for_fraction(rates, 10.0, 0.99, 4) == 4);
        REQUIRE_FALSE(min_overhead_for_fraction(rates, 10.0, 0.999, 4).has_value());
    }
    SECTION("ensemble form with paired records") {
        std::vector<TrialRecord> records;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            for (int k = 1; k <= 3; ++k) {
                TrialRecord rec;
                rec.scheme = Scheme::nf;
                rec.overhead = k;
                rec.seed = seed;
                rec.rate_upper_bps_hz = 10.0;
                rec.rate_bps_hz = k == 3 ? 10.0 : 2.0 * k;
                records.push_back(rec);
            }
        }
        REQUIRE(min_overhead_for_fraction(records, Scheme::nf, 0.99, 3) == 3);
        REQUIRE(min_overhead_for_fraction(records, Scheme::nf, 0.2, 3) == 1);
        // Perfect-CSI plugged in: rate equals the bound at K = 1 already.
        for (TrialRecord& rec : records)
            rec.rate_bps_hz = rec.rate_upper_bps_hz;
        REQUIRE(min_overhead_for_fraction(records, Scheme::nf, 1.0, 3) == 1);
        REQUIRE_THROWS_AS(min_overhead_for_fraction(records, Scheme::dft, 0.5, 3),
                          std::invalid_argument);
    }
}

TEST_CASE("scheme names round trip") {
    for (Scheme scheme : {Scheme::dft, Scheme::nf, Scheme::nf_lasso, Scheme::nf_refine,
                          Scheme::dft_refine})
        REQUIRE(scheme_from_name(scheme_name(scheme)) == scheme);
    REQUIRE_FALSE(scheme_from_name("NOPE").has_value());
}
