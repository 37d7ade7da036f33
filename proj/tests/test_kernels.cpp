#include "doctest.h"

#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "dtsnn/kernels.hpp"

using namespace dtsnn;

namespace {

std::int64_t random_i64(std::mt19937_64& rng) {
    switch (rng() % 4) {
    case 0: return static_cast<std::int64_t>(rng() % 201) - 100;
    case 1: return static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    case 2: return static_cast<std::int64_t>(rng() >> 2) * (rng() % 2 ? 1 : -1);
    default: return static_cast<std::int64_t>(rng() % 2 ? std::numeric_limits<std::int64_t>::min() / 4 : std::numeric_limits<std::int64_t>::max() / 4);
    }
}

} // namespace

TEST_CASE("scalar variant is always available and first") {
    const auto all = kernels::available();
    REQUIRE(!all.empty());
    CHECK(all.front()->name == "scalar");
    CHECK_THROWS_AS(kernels::select("no-such-kernel"), std::invalid_argument);
    MESSAGE("active kernels: " << kernels::active().name);
}

TEST_CASE("every kernel variant matches the scalar reference") {
    const auto& ref = kernels::scalar();
    std::mt19937_64 rng(17);
    for (const kernels::KernelSet* k : kernels::available()) {
        CAPTURE(k->name);
        for (int trial = 0; trial < 3000; ++trial) {
            const std::size_t n = rng() % 70;
            std::vector<std::int32_t> col(n);
            for (auto& w : col) w = static_cast<std::int32_t>(rng() % 2 ? static_cast<std::int64_t>(rng() % 255) - 127 : static_cast<std::int32_t>(rng()));
            std::vector<std::int64_t> acc(n), pot(n);
            for (auto& a : acc) a = static_cast<std::int64_t>(rng() % 100001) - 50000;
            for (auto& p : pot) p = random_i64(rng);

            std::int64_t count = static_cast<std::int64_t>(rng() % 41) - 20;
            if (trial % 97 == 0) count = std::int64_t{1} << 33; // outside the 32-bit multiply fast path

            auto acc_ref = acc, acc_k = acc;
            ref.accumulate_scaled(acc_ref, col, count);
            k->accumulate_scaled(acc_k, col, count);
            REQUIRE(acc_ref == acc_k);

            const unsigned shift = static_cast<unsigned>(rng() % 64);
            const std::int64_t hi = 1 + static_cast<std::int64_t>(rng() % 5000);
            const std::int64_t lo = rng() % 2 ? std::numeric_limits<std::int64_t>::min() : -(1 + static_cast<std::int64_t>(rng() % 5000));
            auto pot_ref = pot, pot_k = pot;
            auto a_ref = acc_ref, a_k = acc_k;
            std::vector<std::uint32_t> out_ref(n), out_k(n);
            const auto n_ref = ref.decay_add_scan(pot_ref, a_ref, shift, lo, hi, out_ref);
            const auto n_k = k->decay_add_scan(pot_k, a_k, shift, lo, hi, out_k);
            REQUIRE(pot_ref == pot_k);
            REQUIRE(a_k == std::vector<std::int64_t>(n, 0));
            REQUIRE(n_ref == n_k);
            out_ref.resize(n_ref);
            out_k.resize(n_k);
            REQUIRE(out_ref == out_k);
        }
    }
}

TEST_CASE("decay_add_scan boundary semantics") {
    for (const kernels::KernelSet* k : kernels::available()) {
        CAPTURE(k->name);
        // exactly at thresholds fires; strictly inside does not
        std::vector<std::int64_t> pot{10, 9, -10, -9, -1, 0, 20, -20, 11};
        std::vector<std::int64_t> acc(pot.size(), 0);
        std::vector<std::uint32_t> out(pot.size());
        const auto n = k->decay_add_scan(pot, acc, 0, -10, 10, out);
        out.resize(n);
        CHECK(out == std::vector<std::uint32_t>{0, 2, 6, 7, 8});

        std::vector<std::int64_t> neg{-5, -1, 5, 1, -6, 7, -8, 9, -9};
        std::vector<std::int64_t> zero(neg.size(), 0);
        std::vector<std::uint32_t> none(neg.size());
        CHECK(k->decay_add_scan(neg, zero, 1, std::numeric_limits<std::int64_t>::min(), 100, none) == 0);
        CHECK(neg == std::vector<std::int64_t>{-3, -1, 2, 0, -3, 3, -4, 4, -5});
    }
}
