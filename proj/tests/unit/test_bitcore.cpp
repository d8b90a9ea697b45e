#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include <rbit/bitcore.hpp>
#include <rbit/summation.hpp>

using namespace rbit;

TEST_CASE("draw_bits range, determinism and counter") {
    BitSource a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(a.draw_bits(1) <= 1);
    CHECK(a.bits_drawn() == 100);
    BitSource c(7), d(7);
    CHECK(c.draw_bits(3) == d.draw_bits(3));
    const auto before = c.bits_drawn();
    c.draw_bits(5);
    CHECK(c.bits_drawn() == before + 5);
    CHECK(b.seed() == 42);
}

TEST_CASE("draw_bits rejects out-of-range counts") {
    BitSource s(1);
    CHECK_THROWS_AS(s.draw_bits(0), std::invalid_argument);
    CHECK_THROWS_AS(s.draw_bits(64), std::invalid_argument);
    CHECK_NOTHROW(s.draw_bits(63));
}

TEST_CASE("stream does not depend on how draws are split") {
    BitSource a(99), b(99);
    for (int round = 0; round < 50; ++round) {
        const std::uint64_t whole = a.draw_bits(40);
        const std::uint64_t hi = b.draw_bits(17);
        const std::uint64_t lo = b.draw_bits(23);
        CHECK(whole == ((hi << 23) | lo));
    }
}

TEST_CASE("dyadic uniform grid values") {
    BitSource s(3);
    for (int i = 0; i < 200; ++i) {
        const double v = sample_dyadic_uniform(s, 1).value();
        CHECK((v == 0.25 || v == 0.75));
    }
    std::map<double, int> seen;
    for (int i = 0; i < 400; ++i)
        ++seen[sample_dyadic_uniform(s, 2).value()];
    CHECK(seen.size() == 4);
    CHECK(seen.count(0.125) == 1);
    CHECK(seen.count(0.375) == 1);
    CHECK(seen.count(0.625) == 1);
    CHECK(seen.count(0.875) == 1);
}

TEST_CASE("dyadic value complement and mirror are exact") {
    for (int p : {1, 5, 30, 52, 63}) {
        const std::uint64_t n = p == 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << p);
        for (std::uint64_t k : {std::uint64_t{1}, n / 2, n / 2 + 1, n}) {
            const DyadicValue d{k, p};
            CHECK(DyadicValue{d.mirror_index(), p}.value() == d.complement());
            if (p <= 52)
                CHECK(d.complement() == 1.0 - d.value());
            CHECK(d.upper_half() == (k > n / 2));
        }
    }
}

TEST_CASE("empirical mean at p=4 within 3 standard errors") {
    // uniform on 16 midpoints: variance = (1 - 4^-4) / 12
    const double sd = std::sqrt((1.0 - std::pow(4.0, -4)) / 12.0);
    BitSource s(2024);
    CompensatedSum sum;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
        sum += sample_dyadic_uniform(s, 4).value();
    CHECK(std::abs(sum.value() / n - 0.5) <= 3.0 * sd / 1000.0);
    CHECK(s.bits_drawn() == 4u * n);
}

TEST_CASE("truncate examples") {
    CHECK(truncate(0.3, 2).value() == 0.375);
    for (int p = 1; p <= 63; ++p)
        CHECK(truncate(0.0, p).value() == std::ldexp(1.0, -(p + 1)));
    CHECK(truncate(0.75, 1).value() == 0.75);
    CHECK_THROWS_AS(truncate(1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(truncate(-0.1, 3), std::invalid_argument);
    CHECK_THROWS_AS(truncate(DyadicValue{1, 3}, 4), std::invalid_argument);
}

TEST_CASE("truncation nesting for all q <= p <= 20") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double u = unif(gen);
        for (int p = 1; p <= 20; ++p) {
            const DyadicValue fine = truncate(u, p);
            for (int q = 1; q <= p; ++q) {
                CHECK(truncate(fine.value(), q) == truncate(u, q));
                CHECK(truncate(fine, q) == truncate(u, q));
            }
        }
    }
}

TEST_CASE("chi-square goodness of fit at p = 1, 4, 8") {
    for (int p : {1, 4, 8}) {
        const std::size_t cells = std::size_t{1} << p;
        std::vector<double> counts(cells, 0.0);
        BitSource s(derive_seed(5, static_cast<std::uint64_t>(p)));
        const int n = 100000;
        for (int i = 0; i < n; ++i)
            counts[sample_dyadic_uniform(s, p).bits()] += 1.0;
        const double expected = static_cast<double>(n) / static_cast<double>(cells);
        double chi2 = 0.0;
        for (double c : counts)
            chi2 += (c - expected) * (c - expected) / expected;
        const boost::math::chi_squared dist(static_cast<double>(cells - 1));
        const double critical = boost::math::quantile(boost::math::complement(dist, 1e-6));
        CHECK(chi2 < critical);
    }
}

TEST_CASE("derived seeds differ across streams and indices") {
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
}

TEST_CASE("running stats and compensated sum") {
    RunningStats r;
    for (double x : {1.0, 2.0, 3.0, 4.0})
        r.push(x);
    CHECK(r.mean() == doctest::Approx(2.5));
    CHECK(r.variance() == doctest::Approx(5.0 / 3.0));
    CompensatedSum s;
    s += 1.0;
    for (int i = 0; i < 1000; ++i)
        s += 1e-16;
    CHECK(s.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}
