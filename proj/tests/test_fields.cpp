#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mpfd/field.hpp"
#include "mpfd/reduce.hpp"
#include "mpfd/registry.hpp"

using namespace mpfd;

TEST_CASE("GridSpec basics") {
    GridSpec g(32);
    CHECK(g.spacing() * g.n == doctest::Approx(g.domain_length).epsilon(1e-15));
    CHECK(g.ext() == 40);
    CHECK(g.volume() == doctest::Approx(kTwoPi * kTwoPi * kTwoPi));
    CHECK_THROWS_AS(GridSpec(4), ConfigError);
    CHECK_THROWS_AS(GridSpec(8, -1.0), ConfigError);
}

TEST_CASE("field storage round-trip per precision") {
    GridSpec g(8);
    Field f16("a", ArrayClass::WkArrays, PrecisionKind::B16, g);
    Field f32("b", ArrayClass::WkArrays, PrecisionKind::B32, g);
    Field f64("c", ArrayClass::WkArrays, PrecisionKind::B64, g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    for (int t = 0; t < 2000; ++t) {
        const double x = d(rng);
        f16.set(1, 2, 3, x);
        f32.set(1, 2, 3, x);
        f64.set(1, 2, 3, x);
        CHECK(f16(1, 2, 3) == decode_b16(encode_b16(x)));
        CHECK(f32(1, 2, 3) == static_cast<double>(static_cast<float>(x)));
        CHECK(f64(1, 2, 3) == x);
        // values already representable survive exactly
        const double g16 = f16(1, 2, 3);
        f16.set(1, 2, 3, g16);
        CHECK(f16(1, 2, 3) == g16);
    }
}

TEST_CASE("registry allocation, classes, overrides, duplicates") {
    GridSpec g(8);
    PrecisionConfig cfg = resolve_preset("HPSP");
    cfg.custom_overrides["T"] = PrecisionKind::B16;
    FieldRegistry reg;
    Field& rho = reg.allocate("rho", ArrayClass::QVector, g, cfg);
    CHECK(rho.storage() == PrecisionKind::B32);  // HPSP stores Q in single
    Field& wk3 = reg.allocate("wk3", ArrayClass::WkArrays, g, resolve_preset("DP"));
    CHECK(wk3.storage() == PrecisionKind::B64);
    Field& T = reg.allocate("T", ArrayClass::WkArrays, g, cfg);
    CHECK(T.storage() == PrecisionKind::B16);
    CHECK_THROWS_AS(reg.allocate("rho", ArrayClass::Residuals, g, cfg), RegistryError);
    CHECK(reg.find("rho") == &rho);
    CHECK(reg.find("nope") == nullptr);
}

TEST_CASE("periodic halos: constant, ramp, trig, idempotence") {
    GridSpec g(8);
    Field f("f", ArrayClass::WkArrays, PrecisionKind::B64, g);

    SUBCASE("constant field wraps to the same constant") {
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) f.set(i, j, k, 3.5);
        fill_halos_periodic(f);
        CHECK(f(-1, -1, -1) == 3.5);
        CHECK(f(8, 3, 11) == 3.5);
        CHECK(f(-4, 0, 0) == 3.5);
    }

    SUBCASE("index ramp wraps periodically in every dimension") {
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) f.set(i, j, k, 100.0 * k + 10.0 * j + i);
        fill_halos_periodic(f);
        CHECK(f(-1, 0, 0) == f(7, 0, 0));
        CHECK(f(8, 0, 0) == f(0, 0, 0));
        CHECK(f(9, 0, 0) == f(1, 0, 0));
        CHECK(f(0, -3, 0) == f(0, 5, 0));
        CHECK(f(0, 0, 10) == f(0, 0, 2));
        // corner composition
        CHECK(f(-2, 9, -4) == f(6, 1, 4));
    }

    SUBCASE("sin samples wrap exactly") {
        GridSpec g16(16);
        Field s("s", ArrayClass::WkArrays, PrecisionKind::B64, g16);
        const double h = g16.spacing();
        for (int k = 0; k < g16.n; ++k)
            for (int j = 0; j < g16.n; ++j)
                for (int i = 0; i < g16.n; ++i) s.set(i, j, k, std::sin(i * h));
        fill_halos_periodic(s);
        for (int off = 1; off <= GridSpec::halo_depth; ++off) {
            CHECK(s(-off, 2, 3) == s(16 - off, 2, 3));
            CHECK(s(15 + off, 2, 3) == s(off - 1, 2, 3));
        }
    }

    SUBCASE("fill_halos is idempotent") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> d(-1, 1);
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) f.set(i, j, k, d(rng));
        fill_halos_periodic(f);
        std::vector<double> snap(f.raw(), f.raw() + g.num_points());
        fill_halos_periodic(f);
        CHECK(std::equal(snap.begin(), snap.end(), f.raw()));
        CHECK(f.halos_fresh());
        f.set(0, 0, 0, 42.0);
        CHECK(!f.halos_fresh());
    }
}

TEST_CASE("reduce_sum: exact and analytic cases") {
    GridSpec g(8);
    Field f("f", ArrayClass::WkArrays, PrecisionKind::B64, g);

    SUBCASE("all ones sums to n^3 exactly") {
        for (int k = 0; k < 8; ++k)
            for (int j = 0; j < 8; ++j)
                for (int i = 0; i < 8; ++i) f.set(i, j, k, 1.0);
        CHECK(reduce_sum(f) == 512.0);
    }

    SUBCASE("alternating +-1 on even n sums to zero exactly") {
        for (int k = 0; k < 8; ++k)
            for (int j = 0; j < 8; ++j)
                for (int i = 0; i < 8; ++i) f.set(i, j, k, ((i + j + k) % 2 == 0) ? 1.0 : -1.0);
        CHECK(reduce_sum(f) == 0.0);
    }

    SUBCASE("equispaced sin samples over a full period") {
        GridSpec g32(32);
        Field s("s", ArrayClass::WkArrays, PrecisionKind::B64, g32);
        const double h = g32.spacing();
        for (int k = 0; k < 32; ++k)
            for (int j = 0; j < 32; ++j)
                for (int i = 0; i < 32; ++i) s.set(i, j, k, std::sin(i * h));
        CHECK(std::abs(reduce_sum(s)) <= 1e-13 * static_cast<double>(g32.interior_points()));
    }
}

TEST_CASE("reduce_sum is bitwise identical across 1, 2 and 4 worker threads") {
    GridSpec g(16);
    Field f("f", ArrayClass::WkArrays, PrecisionKind::B64, g);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) f.set(i, j, k, d(rng));
    const double s1 = reduce_sum(f, 1);
    const double s2 = reduce_sum(f, 2);
    const double s4 = reduce_sum(f, 4);
    CHECK(s1 == s2);
    CHECK(s1 == s4);

    std::vector<double> buf(100001);
    for (auto& x : buf) x = d(rng);
    const std::span<const double> sp{buf.data(), buf.size()};
    CHECK(deterministic_sum(sp, 1) == deterministic_sum(sp, 3));
    CHECK(deterministic_sum(sp, 1) == deterministic_sum(sp, 8));
}

TEST_CASE("interior_all_finite") {
    GridSpec g(8);
    Field f("f", ArrayClass::WkArrays, PrecisionKind::B64, g);
    CHECK(interior_all_finite(f));
    f.set(3, 4, 5, std::numeric_limits<double>::quiet_NaN());
    CHECK(!interior_all_finite(f));
    f.set(3, 4, 5, std::numeric_limits<double>::infinity());
    CHECK(!interior_all_finite(f, 4));
}

namespace {

FieldRegistry make_census(const GridSpec& g, const PrecisionConfig& cfg, int n_wk) {
    FieldRegistry reg;
    static const char* qn[5] = {"rho", "rhou", "rhov", "rhow", "rhoE"};
    for (int i = 0; i < 5; ++i) reg.allocate(qn[i], ArrayClass::QVector, g, cfg);
    for (int i = 0; i < 5; ++i) reg.allocate("rk" + std::to_string(i), ArrayClass::RkArrays, g, cfg);
    for (int i = 0; i < 5; ++i)
        reg.allocate("res" + std::to_string(i), ArrayClass::Residuals, g, cfg);
    for (int i = 0; i < n_wk; ++i)
        reg.allocate("wk" + std::to_string(i), ArrayClass::WkArrays, g, cfg);
    return reg;
}

}  // namespace

TEST_CASE("memory report: uniform presets hit exact byte-width gains") {
    GridSpec g(16);
    const auto hp = make_census(g, resolve_preset("HP"), 5);
    CHECK(memory_report(hp).gain == 4.0);
    const auto sp = make_census(g, resolve_preset("SP"), 17);
    CHECK(memory_report(sp).gain == 2.0);
    const auto dp = make_census(g, resolve_preset("DP"), 17);
    CHECK(memory_report(dp).gain == 1.0);
}

TEST_CASE("memory report: mixed preset matches hand-evaluated census formula") {
    GridSpec g(16);
    const int n_wk = 5;
    const auto reg = make_census(g, resolve_preset("HPSP"), n_wk);
    const MemoryReport m = memory_report(reg);
    // HPSP: q,rk at B32 (4 bytes), res,wk at B16 (2 bytes); per-point bytes:
    const double pts = static_cast<double>(g.num_points());
    const double total = pts * (5 * 4 + 5 * 4 + 5 * 2 + n_wk * 2);
    const double base = pts * (15 + n_wk) * 8;
    CHECK(static_cast<double>(m.total_bytes) == total);
    CHECK(m.gain == base / total);
    CHECK(m.per_class[static_cast<std::size_t>(ArrayClass::WkArrays)].count == n_wk);
}

TEST_CASE("communication volume model") {
    GridSpec g(256);
    PrecisionConfig dp = resolve_preset("DP");
    FieldRegistry reg;
    reg.allocate("rho", ArrayClass::QVector, g, dp);
    ExchangeCounts once{};
    once[static_cast<std::size_t>(ArrayClass::QVector)] = 1.0;

    SUBCASE("derived example: 4 processes split along x, one B64 field") {
        const auto r = comm_volume_report(reg, {4, 1, 1}, once);
        CHECK(r.total_bytes == 2.0 * 2.0 * (256.0 * 256.0) * 8.0);
        CHECK(r.total_bytes == doctest::Approx(2.097152e6));
    }

    SUBCASE("precision ratios are exactly 4:2:1") {
        FieldRegistry reg32, reg16;
        reg32.allocate("rho", ArrayClass::QVector, g, resolve_preset("SP"));
        reg16.allocate("rho", ArrayClass::QVector, g, resolve_preset("HP"));
        const double v64 = comm_volume_report(reg, {4, 1, 1}, once).total_bytes;
        const double v32 = comm_volume_report(reg32, {4, 1, 1}, once).total_bytes;
        const double v16 = comm_volume_report(reg16, {4, 1, 1}, once).total_bytes;
        CHECK(v32 == 0.5 * v64);
        CHECK(v16 == 0.25 * v64);
    }

    SUBCASE("indivisible decomposition is a configuration error") {
        CHECK_THROWS_AS(comm_volume_report(reg, {3, 1, 1}, once), ConfigError);
        CHECK_THROWS_AS(comm_volume_report(reg, {0, 1, 1}, once), ConfigError);
    }

    SUBCASE("only partitioned dimensions contribute faces") {
        const auto r1 = comm_volume_report(reg, {2, 2, 1}, once);
        // local block 128 x 128 x 256; faces: x (128*256) + y (128*256)
        CHECK(r1.total_bytes == 2.0 * 2.0 * (128.0 * 256.0 + 128.0 * 256.0) * 8.0);
    }
}
