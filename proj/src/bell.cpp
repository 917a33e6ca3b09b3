#include "stcalc/bell.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace stcalc {

namespace {

std::atomic<int> g_max_n{64};

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Multiplicity vectors of partitions of n into exactly k parts, largest part first.
void enumerate(int remaining, int parts_left, int max_part, std::vector<int>& mult,
               std::vector<std::vector<int>>& out) {
    if (remaining == 0 && parts_left == 0) {
        out.push_back(mult);
        return;
    }
    if (remaining <= 0 || parts_left <= 0) return;
    // Each remaining part is at least 1 and at most max_part.
    if (remaining < parts_left || remaining > parts_left * max_part) return;
    for (int h = std::min(max_part, remaining - parts_left + 1); h >= 1; --h) {
        ++mult[h];
        enumerate(remaining - h, parts_left - 1, h, mult, out);
        --mult[h];
    }
}

std::vector<BellTerm> build_terms(int n, int k) {
    std::vector<std::vector<int>> mults;
    std::vector<int> mult(static_cast<std::size_t>(n) + 1, 0);
    enumerate(n, k, n, mult, mults);
    const BigInt nfact = factorial(n);
    std::vector<BellTerm> terms;
    terms.reserve(mults.size());
    for (const auto& m : mults) {
        BellTerm term;
        BigInt den = 1;
        for (int h = 1; h <= n; ++h) {
            if (m[h] == 0) continue;
            term.parts.emplace_back(h, m[h]);
            den *= factorial(m[h]);
            den *= boost::multiprecision::pow(factorial(h), static_cast<unsigned>(m[h]));
        }
        term.coefficient = nfact / den;
        terms.push_back(std::move(term));
    }
    return terms;
}

struct Memo {
    std::mutex mutex;
    std::map<std::pair<int, int>, std::unique_ptr<const std::vector<BellTerm>>> table;
};

Memo& memo() {
    static Memo m;
    return m;
}

}  // namespace

int bell_max_n() noexcept { return g_max_n.load(); }

void set_bell_max_n(int n) {
    if (n < 1) throw Error(ErrorCode::DomainError, "bell", "cap must be positive");
    g_max_n.store(n);
}

const std::vector<BellTerm>& bell_terms(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw Error(ErrorCode::DomainError, "bell", "need 1 <= k <= n");
    if (n > bell_max_n()) {
        throw Error(ErrorCode::DomainError, "bell", "n exceeds the partition cap " + std::to_string(bell_max_n()));
    }
    Memo& m = memo();
    std::lock_guard lock(m.mutex);
    auto& slot = m.table[{n, k}];
    if (!slot) slot = std::make_unique<const std::vector<BellTerm>>(build_terms(n, k));
    // Entries are never erased or moved, so the reference outlives the lock.
    return *slot;
}

}  // namespace stcalc
