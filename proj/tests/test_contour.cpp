#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hslpp/contour.hpp"

using namespace hslpp;

namespace {
const double kTwoPi = 2.0 * std::acos(-1.0);
}

TEST_CASE("segment quadrature integrates entire functions to machine accuracy") {
    Contour ct;
    ct.pieces = {ContourPiece::segment({0.0, 0.0}, {1.0, 1.0})};
    QuadResult r = quad_contour([](cplx z) { return std::exp(z); }, ct, 1e-13);
    cplx expect = std::exp(cplx(1.0, 1.0)) - 1.0;
    CHECK(std::abs(r.value - expect) < 1e-12);
    CHECK(r.err < 1e-10);
}

TEST_CASE("circle contour winds once: residue calculus on powers of z") {
    Contour circle = circle_contour(1.7);
    REQUIRE(circle.closed);
    REQUIRE(circle.is_connected());
    for (int n : {-3, -2, 0, 1, 4}) {
        QuadResult r = quad_contour([&](cplx z) { return std::pow(z, n); }, circle, 1e-12);
        CHECK(std::abs(r.value) < 1e-11);
    }
    QuadResult inv = quad_contour([](cplx z) { return 1.0 / z; }, circle, 1e-12);
    CHECK(std::abs(inv.value - cplx(0.0, kTwoPi)) < 1e-11);
}

TEST_CASE("loop contour pinches its back but keeps winding number one") {
    Contour loop = loop_contour(2.0, 0.6);
    REQUIRE(loop.closed);
    REQUIRE(loop.is_connected());
    // Front and back radii are hit at angles 0 and pi.
    cplx z, dz;
    loop.pieces.front().at(0.0, z, dz);
    CHECK(std::abs(z - cplx(-0.6, 0.0)) < 1e-12);
    // Poles inside the back circle and between back and front are both
    // enclosed exactly once; poles beyond the front are not.
    for (double pole : {0.3, -0.3, 1.2, -0.45}) {
        QuadResult r = quad_contour([&](cplx w) { return 1.0 / (w - pole); }, loop, 1e-11);
        bool inside = std::abs(pole) < 0.6 || (pole > 0 && pole < 2.0);
        cplx expect = inside ? cplx(0.0, kTwoPi) : cplx(0.0, 0.0);
        CHECK(std::abs(r.value - expect) < 1e-9);
    }
    CHECK_THROWS_AS(loop_contour(0.5, 1.0), std::domain_error);
}

TEST_CASE("wedge contour C(x,theta,R,r) is closed, connected, and winds once") {
    Contour ct = build_contour_C(1.18, 0.8, 2.5, 0.1);
    REQUIRE(ct.closed);
    REQUIRE(ct.is_connected());
    QuadResult r = quad_contour([](cplx z) { return 1.0 / (z - 1.18) / (z + 30.0); }, ct, 1e-11);
    CHECK(std::abs(r.value - cplx(0.0, kTwoPi) / cplx(31.18, 0.0)) < 1e-9);
}

TEST_CASE("quadrature reports an error estimate that bounds the true error") {
    Contour circle = circle_contour(1.0);
    auto f = [](cplx z) { return std::exp(3.0 * z) / (z * z); };  // residue 3
    QuadResult r = quad_contour(f, circle, 1e-10);
    double true_err = std::abs(r.value - cplx(0.0, 3.0 * kTwoPi));
    CHECK(true_err < 1e-9);
    CHECK(true_err < 50.0 * r.err + 1e-12);
}

TEST_CASE("noise floor stops refinement on an integrand with limited accuracy") {
    // Simulate an inner quadrature: the integrand carries ~1e-8 relative
    // noise.  With the matching floor the quadrature returns promptly
    // instead of subdividing toward the depth cap, and the answer is still
    // correct to the noise level.
    Contour circle = circle_contour(1.0);
    long long calls = 0;
    auto noisy = [&](cplx z) {
        ++calls;
        double wiggle = 1e-8 * std::cos(1e7 * std::arg(z));
        return (1.0 + wiggle) / z;
    };
    QuadResult r = quad_contour(noisy, circle, 0.0, 1e-7);
    CHECK(std::abs(r.value - cplx(0.0, kTwoPi)) < 1e-5);
    CHECK(calls < 40000);
}

TEST_CASE("piece endpoints agree with the reported start and end") {
    ContourPiece arc = ContourPiece::arc_piece({0.5, 0.0}, 2.0, 0.3, 1.9);
    cplx z, dz;
    arc.at(0.0, z, dz);
    CHECK(std::abs(z - arc.start()) < 1e-14);
    arc.at(1.0, z, dz);
    CHECK(std::abs(z - arc.end()) < 1e-14);

    ContourPiece lp = ContourPiece::loop_piece(2.0, 1.0, 0.0, 1.5);
    lp.at(0.0, z, dz);
    CHECK(std::abs(z - lp.start()) < 1e-14);
    lp.at(1.0, z, dz);
    CHECK(std::abs(z - lp.end()) < 1e-14);
}

TEST_CASE("derivative of the parameterization matches finite differences") {
    for (ContourPiece piece :
         {ContourPiece::segment({-1.0, 0.5}, {2.0, -0.25}),
          ContourPiece::arc_piece({0.1, -0.2}, 1.3, -0.4, 2.2),
          ContourPiece::loop_piece(1.8, 0.7, 0.5, 2.9)}) {
        for (double u : {0.12, 0.5, 0.87}) {
            cplx z0, z1, dz, tmp;
            double h = 1e-6;
            piece.at(u - h, z0, tmp);
            piece.at(u + h, z1, tmp);
            piece.at(u, tmp, dz);
            CHECK(std::abs((z1 - z0) / (2.0 * h) - dz) < 1e-7);
        }
    }
}
