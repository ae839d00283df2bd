#include <doctest.h>

#include <cmath>
#include <random>

#include "ladartrack/errors.hpp"
#include "ladartrack/kalman.hpp"
#include "oracles.hpp"

using namespace ladar;

namespace {

oracle::DenseKf dense_from(const KalmanState& s) {
    oracle::DenseKf d;
    for (int i = 0; i < 6; ++i) {
        d.x[i] = s.x(i);
        for (int j = 0; j < 6; ++j) d.P[i][j] = s.P(i, j);
    }
    return d;
}

double max_diff(const KalmanState& s, const oracle::DenseKf& d) {
    double m = 0;
    for (int i = 0; i < 6; ++i) {
        m = std::max(m, std::abs(s.x(i) - d.x[i]));
        for (int j = 0; j < 6; ++j) m = std::max(m, std::abs(s.P(i, j) - d.P[i][j]));
    }
    return m;
}

double asymmetry(const KalmanState& s) { return (s.P - s.P.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("initial state") {
    KalmanParams p;
    p.p0_pos = 2.0;
    p.p0_vel = 7.0;
    const auto s = kf_init({1, 2, 3}, p);
    CHECK(position_of(s) == Point3{1, 2, 3});
    CHECK(velocity_of(s) == Point3{0, 0, 0});
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(s.P(i, j) == (i != j ? 0.0 : (i < 3 ? 2.0 : 7.0)));
}

TEST_CASE("prediction follows constant velocity") {
    auto s = kf_init({1, 2, 3});
    s.x.tail<3>() << 0.5, -1.0, 2.0;
    const auto p1 = kf_predict(s, 1);
    CHECK(p1.centroid.x == doctest::Approx(1.5));
    CHECK(p1.centroid.y == doctest::Approx(1.0));
    CHECK(p1.centroid.z == doctest::Approx(5.0));
    const auto p3 = kf_predict(s, 3);
    CHECK(p3.centroid.x == doctest::Approx(2.5));
    CHECK(velocity_of(p3.state).z == doctest::Approx(2.0));

    // zero process noise: position variance grows by dt^2 * velocity variance
    KalmanParams quiet;
    quiet.q = 0.0;
    const auto q = kf_predict(kf_init({0, 0, 0}, quiet), 2).state;
    CHECK(q.P(0, 0) == doctest::Approx(1.0 + 4.0 * 10.0));
    CHECK(q.P(0, 3) == doctest::Approx(20.0));
}

TEST_CASE("random cycles agree with the dense reference") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-50, 50), qd(0.001, 1.0), rd(0.01, 5.0);
    std::uniform_int_distribution<int> dt(1, 3);
    for (int run = 0; run < 20; ++run) {
        KalmanParams p;
        p.q = qd(rng);
        p.r = rd(rng);
        auto s = kf_init({u(rng), u(rng), u(rng)}, p);
        auto d = dense_from(s);
        for (int step = 0; step < 30; ++step) {
            const int h = dt(rng);
            s = kf_predict(s, h).state;
            d = oracle::dense_predict(d, h, p.q);
            CHECK(max_diff(s, d) < 1e-9 * std::max(1.0, s.P.cwiseAbs().maxCoeff()));
            const Point3 z{u(rng), u(rng), u(rng)};
            s = kf_update(s, z);
            d = oracle::dense_update(d, {z.x, z.y, z.z}, p.r);
            CHECK(max_diff(s, d) < 1e-9);
            CHECK(asymmetry(s) < 1e-12);
        }
    }
}

TEST_CASE("measurement noise limits") {
    auto s = kf_init({0, 0, 0});
    s = kf_predict(s).state;

    KalmanState ignore = s;
    ignore.params.r = 1e12;
    const auto a = kf_update(ignore, {10, 10, 10});
    CHECK(std::abs(position_of(a).x - position_of(s).x) < 1e-9);

    KalmanState trust = s;
    trust.params.r = 0.0;
    const auto b = kf_update(trust, {10, -4, 3});
    CHECK(position_of(b).x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(position_of(b).y == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(std::abs(b.P(0, 0)) < 1e-9);
}

TEST_CASE("singular innovation is reported") {
    KalmanState s = kf_init({0, 0, 0});
    s.params.r = 0.0;
    s.P.setZero();
    CHECK_THROWS_AS(kf_update(s, {1, 1, 1}), SingularInnovation);
    CHECK_THROWS_AS(kf_update(kf_init({0, 0, 0}), {NAN, 0, 0}), InvalidConfig);
}

TEST_CASE("velocity converges on a noiseless straight line") {
    const Point3 v{1.0, -0.5, 0.25};
    auto s = kf_init({0, 0, 0});
    int converged_at = -1;
    for (int k = 1; k <= 20; ++k) {
        s = kf_predict(s).state;
        s = kf_update(s, {v.x * k, v.y * k, v.z * k});
        const Point3 e = velocity_of(s);
        if (distance(e, v) < 1e-3 && converged_at < 0) converged_at = k;
    }
    CHECK(converged_at > 0);
    CHECK(converged_at <= 20);
}

TEST_CASE("gate is a closed ball") {
    CHECK(centroid_gate({0, 0, 0}, {3, 0, 0}, 3.0));
    CHECK(centroid_gate({0, 0, 0}, {0, 3, 4}, 5.0));
    CHECK_FALSE(centroid_gate({0, 0, 0}, {3.0001, 0, 0}, 3.0));
}

TEST_CASE("box filter tracks a moving box") {
    BoundingBox b{{2, 3, 4}, {5, 6, 8}};
    auto s = box_kf_init(b);
    CHECK(box_kf_bbox(s) == b);
    for (int k = 1; k <= 25; ++k) {
        b.min.x += 1;
        b.max.x += 1;
        s = box_kf_update(box_kf_predict(s), b);
    }
    CHECK(box_kf_bbox(s) == b);
    const auto next = box_kf_bbox(box_kf_predict(s));
    CHECK(next.min.x == b.min.x + 1);
    CHECK(next.max.x == b.max.x + 1);
    CHECK(next.min.y == b.min.y);

    // crossing estimates are reordered
    BoxKalman crossed = box_kf_init({{0, 0, 0}, {1, 1, 1}});
    crossed.axes[0].x(0) = 4.0;
    const auto fixed = box_kf_bbox(crossed);
    CHECK(fixed.min.x == 1);
    CHECK(fixed.max.x == 4);
}

TEST_CASE("parameter validation") {
    KalmanParams p;
    CHECK_NOTHROW(p.validate());
    p.q = -1;
    CHECK_THROWS_AS(p.validate(), InvalidConfig);
    p = {};
    p.p0_pos = 0;
    CHECK_THROWS_AS(p.validate(), InvalidConfig);
}
