#include <catch2/catch_amalgamated.hpp>

#include "marten/alloy.hpp"
#include "marten/deadload.hpp"
#include "marten/wells.hpp"

using namespace marten;

namespace {
std::vector<Mat3> owells_variants(double a, double b, double g) {
    double p = 0.5 * (a + g), m = 0.5 * (a - g);
    auto M = [](std::initializer_list<double> v) {
        Mat3 out;
        int i = 0;
        for (double x : v) { out(i / 3, i % 3) = x; ++i; }
        return out;
    };
    return {M({p, m, 0, m, p, 0, 0, 0, b}),  M({p, -m, 0, -m, p, 0, 0, 0, b}),
            M({p, 0, m, 0, b, 0, m, 0, p}),  M({p, 0, -m, 0, b, 0, -m, 0, p}),
            M({b, 0, 0, 0, p, m, 0, m, p}),  M({b, 0, 0, 0, p, -m, 0, -m, p})};
}
} // namespace

TEST_CASE("rotation groups have the right orders and are proper") {
    CHECK(rotation_group("identity").size() == 1);
    CHECK(rotation_group("orthorhombic").size() == 4);
    CHECK(rotation_group("tetragonal").size() == 8);
    auto cubic = rotation_group("cubic");
    CHECK(cubic.size() == 24);
    for (const auto& Q : cubic) CHECK(is_rotation(Q));
    CHECK_THROWS_AS(rotation_group("hexagonal"), ParseError);
}

TEST_CASE("CuAlNi variants reproduce the six orthorhombic stretches") {
    WellFamily fam = variants(alloy_preset("cualni").U1, "cubic");
    REQUIRE(fam.variants.size() == 6);
    auto ref = owells_variants(1.0619, 0.9178, 1.0230);
    for (const Mat3& R : ref) {
        double best = 1e300;
        for (const Mat3& V : fam.variants) best = std::min(best, (V - R).lpNorm<Eigen::Infinity>());
        CHECK(best <= 1e-12);
    }
}

TEST_CASE("variant counts for degenerate stretches") {
    CHECK(variants(Mat3(0.7 * Mat3::Identity()), "cubic").variants.size() == 1);
    CHECK(variants(Mat3(Vec3(1.1, 1.1, 0.9).asDiagonal()), "cubic").variants.size() == 3);
    CHECK(variants(alloy_preset("cualni").U1, "identity").variants.size() == 1);
    CHECK_THROWS_AS(variants(Mat3(Vec3(1.0, -1.0, 1.0).asDiagonal()), "cubic"),
                    PreconditionError);
}

TEST_CASE("variant list is closed under the group action") {
    WellFamily fam = variants(alloy_preset("cualni").U1, "cubic");
    for (const Mat3& Q : rotation_group("cubic")) {
        for (const Mat3& V : fam.variants) {
            Mat3 W = Q * V * Q.transpose();
            double best = 1e300;
            for (const Mat3& X : fam.variants) best = std::min(best, (X - W).norm());
            CHECK(best <= 1e-10);
        }
    }
}

TEST_CASE("constrained energy: reference point, off-well, dot-product oracle") {
    AlloySpec a = alloy_preset("cualni");
    WellFamily fam = variants(a.U1, a.group);
    Orientation orient = Orientation::u1_eigenframe(a.U1);
    WellFamily famM = fam;
    for (auto& V : famM.variants) V = orient.to_machine(V);
    Mat3 T = BiaxialLoad(1.0, 1.0).tensor();
    Mat3 R1U1 = well_minimizer(T, famM.variants[0]).rotation * famM.variants[0];

    CHECK(constrained_energy(R1U1, T, R1U1, famM) == Catch::Approx(0.0).margin(1e-14));

    Mat3 off = R1U1;
    off(0, 0) += 1e-3;
    CHECK(std::isinf(constrained_energy(off, T, R1U1, famM)));

    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        Mat3 A = random_rotation(rng) * famM.variants[rng() % famM.variants.size()];
        double direct = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) direct -= T(i, j) * (A(i, j) - R1U1(i, j));
        CHECK(constrained_energy(A, T, R1U1, famM) == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("dilatational energy: wells, infinity branch, well depth") {
    DilatationalSpec spec =
        make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0);
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        Mat3 R = random_rotation(rng);
        for (auto& c : spec.Z.components) {
            double t = c.first;
            CHECK(std::abs(dilatational_energy(Mat3(std::cbrt(t) * R), spec, 0.0)) <= 1e-12);
        }
        CHECK(dilatational_energy(Mat3(1.2 * R), spec, 0.05) ==
              Catch::Approx(-0.05).margin(1e-12));
        CHECK(std::abs(dilatational_energy(Mat3(1.0 * R), spec, 0.05)) <= 1e-12);
    }
    Mat3 flipped = Mat3::Identity();
    flipped(0, 0) = -1.0;
    CHECK(std::isinf(dilatational_energy(flipped, spec, 0.0)));
    CHECK(std::isinf(dilatational_energy(Mat3(Mat3::Zero()), spec, 0.0)));
    CHECK_THROWS_AS(dilatational_energy(Mat3::Identity(), spec, -0.1), PreconditionError);
}

TEST_CASE("dilatational energy: frame indifference and isotropy") {
    DilatationalSpec spec =
        make_dilatational(RealSet::points({0.9, 1.05}), RealSet::points({1.3}), 1.5);
    Rng rng(29);
    for (int rep = 0; rep < 30; ++rep) {
        Mat3 A;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = 1.1 * normal01(rng);
        if (A.determinant() <= 0.05) continue;
        Mat3 Q = random_rotation(rng);
        double w = dilatational_energy(A, spec, 0.3);
        CHECK(std::abs(dilatational_energy(Mat3(Q * A), spec, 0.3) - w) <= 1e-9 * (1.0 + std::abs(w)));
        CHECK(std::abs(dilatational_energy(Mat3(A * Q), spec, 0.3) - w) <= 1e-9 * (1.0 + std::abs(w)));
    }
}

TEST_CASE("dilatational growth bound over seeded samples") {
    for (double alpha : {1.5, 2.0}) {
        DilatationalSpec spec =
            make_dilatational(RealSet::points({1.0}), RealSet::points({1.25}), alpha);
        Rng rng(31);
        int kept = 0;
        for (int rep = 0; rep < 100000; ++rep) {
            Mat3 A;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) A(i, j) = 1.5 * normal01(rng);
            if (A.determinant() <= 0.0) A.col(0) *= -1.0;
            if (A.determinant() <= 0.0) continue;
            ++kept;
            double w = dilatational_energy(A, spec, 0.0);
            CHECK(w - spec.c0 - spec.c1 * std::pow(A.norm(), alpha) >= -1e-9);
        }
        CHECK(kept > 90000);
    }
}

TEST_CASE("assembled h is convex: second divided differences") {
    for (auto spec : {make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0),
                      make_dilatational(RealSet{{{0.85, 0.95}}}, RealSet{{{1.2, 1.25}, {1.4, 1.4}}},
                                        1.7)}) {
        double hi = spec.b + 2.0;
        int n = 2000;
        double step = hi / n;
        for (int i = 2; i + 1 < n; ++i) {
            double t = i * step;
            double d2 = dilat_h(spec, t + step) - 2.0 * dilat_h(spec, t) + dilat_h(spec, t - step);
            CHECK(d2 / (step * step) >= -1e-9);
        }
    }
}

TEST_CASE("check_hypotheses on the dilatational family") {
    DilatationalSpec spec =
        make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0);
    double prev = 1e300;
    for (double tau : {0.1, 0.01, 0.001}) {
        auto rep = check_hypotheses(dilatational_density(spec, tau), spec.eps, 3000, 42);
        CHECK(std::abs(rep.delta_measured - tau) <= 1e-6);
        CHECK(std::abs(rep.min_w_near_k1) <= 1e-9);
        CHECK(rep.growth_ok);
        CHECK(rep.delta_measured < prev);
        prev = rep.delta_measured;
    }
    // (H5) floor is positive once tau is small enough for this eps
    auto rep = check_hypotheses(dilatational_density(spec, 0.001), spec.eps, 3000, 42);
    CHECK(rep.alpha_measured > 0.0);
}

TEST_CASE("check_hypotheses: equal-depth wells at tau = 0") {
    DilatationalSpec spec =
        make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0);
    auto rep = check_hypotheses(dilatational_density(spec, 0.0), spec.eps, 2000, 7);
    CHECK(std::abs(rep.delta_measured) <= 1e-9);

    Mat2 A1, A2;
    A1 << 0, 0, 0, 1;
    A2 << 1, 1, 1, 1;
    auto dw = double_well_density(A1, A2, 0.0);
    auto rep2 = check_hypotheses(dw, 0.2 * dw.well_separation, 2000, 7);
    CHECK(std::abs(rep2.delta_measured) <= 1e-6);
    CHECK(rep2.alpha_measured > 0.0);
    CHECK(rep2.growth_ok);
}

TEST_CASE("check_hypotheses preconditions") {
    DilatationalSpec spec =
        make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0);
    auto W = dilatational_density(spec, 0.01);
    CHECK_THROWS_AS(check_hypotheses(W, 10.0, 100, 1), PreconditionError);
    auto W2 = W;
    W2.box_radius = 0.5; // cannot contain the wells
    CHECK_THROWS_AS(check_hypotheses(W2, spec.eps, 100, 1), PreconditionError);
}

TEST_CASE("dilatational spec validation") {
    CHECK_THROWS_AS(make_dilatational(RealSet::points({1.0}), RealSet::points({1.0}), 2.0),
                    PreconditionError);
    CHECK_THROWS_AS(make_dilatational(RealSet::points({-1.0}), RealSet::points({1.2}), 2.0),
                    PreconditionError);
    CHECK_THROWS_AS(make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 3.5),
                    PreconditionError);
    CHECK_THROWS_AS(make_dilatational(RealSet::points({1.0}), RealSet::points({1.2}), 2.0, -1.0),
                    PreconditionError);
}
