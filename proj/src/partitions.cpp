#include "vanspec/partitions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

namespace vanspec {

namespace {

void check_size(int p) {
    if (p < 1 || p > kMaxPartitionSize)
        throw std::invalid_argument("partition size p=" + std::to_string(p) + " outside [1, " +
                                    std::to_string(kMaxPartitionSize) + "]");
}

}  // namespace

SetPartition SetPartition::from_labels(std::span<const int> labels) {
    if (labels.empty()) throw std::invalid_argument("empty partition");
    std::vector<int> canon(labels.size());
    std::map<int, int> renumber;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = renumber.try_emplace(labels[i], static_cast<int>(renumber.size()) + 1);
        canon[i] = it->second;
    }
    return SetPartition(std::move(canon), static_cast<int>(renumber.size()));
}

SetPartition SetPartition::parse(const std::string& text) {
    std::vector<int> owner;
    int block = 0;
    bool open = false;
    int number = -1;
    auto flush = [&] {
        if (number < 1) throw std::invalid_argument("bad partition element in '" + text + "'");
        if (static_cast<int>(owner.size()) < number) owner.resize(number, 0);
        if (owner[number - 1] != 0) throw std::invalid_argument("element repeated in '" + text + "'");
        owner[number - 1] = block;
        number = -1;
    };
    for (char ch : text) {
        if (ch == '{') {
            if (open) throw std::invalid_argument("nested block in '" + text + "'");
            open = true;
            ++block;
        } else if (ch == '}' || ch == ',') {
            if (!open) throw std::invalid_argument("stray separator in '" + text + "'");
            flush();
            if (ch == '}') open = false;
        } else if (ch >= '0' && ch <= '9') {
            number = (number < 0 ? 0 : number * 10) + (ch - '0');
        } else if (ch != ' ') {
            throw std::invalid_argument("unexpected character in '" + text + "'");
        }
    }
    if (open || owner.empty() || std::ranges::count(owner, 0) != 0)
        throw std::invalid_argument("'" + text + "' is not a partition of {1..p}");
    return from_labels(owner);
}

std::vector<std::vector<int>> SetPartition::block_lists() const {
    std::vector<std::vector<int>> out(k_);
    for (int i = 0; i < size(); ++i) out[labels_[i] - 1].push_back(i + 1);
    return out;
}

std::string SetPartition::to_string() const {
    std::ostringstream os;
    for (const auto& blk : block_lists()) {
        os << '{';
        for (std::size_t j = 0; j < blk.size(); ++j) os << (j ? "," : "") << blk[j];
        os << '}';
    }
    return os.str();
}

SetPartition SetPartition::rotated() const {
    std::vector<int> r(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) r[(i + 1) % labels_.size()] = labels_[i];
    return from_labels(r);
}

std::vector<SetPartition> enumerate_partitions(int p, int k) {
    check_size(p);
    if (k < 0 || k > p) throw std::invalid_argument("block count k=" + std::to_string(k) + " outside [1, p]");
    std::vector<SetPartition> out;
    std::vector<int> rgs(p, 1);
    // Restricted growth strings: rgs[i] <= 1 + max(rgs[0..i-1]).
    auto recurse = [&](auto&& self, int i, int used) -> void {
        if (k > 0 && used + (p - i) < k) return;
        if (i == p) {
            if (k == 0 || used == k) out.push_back(SetPartition::from_labels(rgs));
            return;
        }
        const int top = (k > 0) ? std::min(used + 1, k) : used + 1;
        for (int b = 1; b <= top; ++b) {
            rgs[i] = b;
            self(self, i + 1, std::max(used, b));
        }
    };
    recurse(recurse, 1, 1);
    return out;
}

bool is_noncrossing(const SetPartition& w) {
    const int p = w.size();
    std::vector<int> last(w.blocks() + 1, 0);
    for (int i = 1; i <= p; ++i) last[w.block_of(i)] = i;
    // Blocks still expecting elements form a stack; revisiting a block that is
    // not on top means some block opened after it is still pending.
    std::vector<int> open;
    std::vector<bool> seen(w.blocks() + 1, false);
    for (int i = 1; i <= p; ++i) {
        const int b = w.block_of(i);
        if (seen[b]) {
            if (open.empty() || open.back() != b) return false;
        } else {
            seen[b] = true;
            open.push_back(b);
        }
        if (last[b] == i) open.pop_back();
    }
    return true;
}

BigInt lattice_count(const SetPartition& w, int n) {
    if (n < 1) throw std::invalid_argument("lattice_count requires n >= 1");
    const int p = w.size();
    const int k = w.blocks();
    if (static_cast<double>(p) * std::log2(static_cast<double>(n)) > 120.0)
        throw std::overflow_error("lattice_count: n^p exceeds 128-bit accumulator range");

    // Element i is an edge carrying t_i from block w_{i+1} into block w_i.
    // Self-loops leave every balance unchanged and contribute a free factor n.
    struct Edge {
        int plus, minus;
    };
    std::vector<Edge> edges;
    int loops = 0;
    for (int i = 1; i <= p; ++i) {
        const int plus = w.block_of(i);
        const int minus = w.block_of(i % p + 1);
        if (plus == minus)
            ++loops;
        else
            edges.push_back({plus - 1, minus - 1});
    }

    using Count = unsigned __int128;
    const int cap = n - 1;
    // remaining[e][b]: capacity still able to move block b's balance after edge e.
    std::vector<std::vector<int>> remaining(edges.size() + 1, std::vector<int>(k, 0));
    for (int e = static_cast<int>(edges.size()) - 1; e >= 0; --e) {
        remaining[e] = remaining[e + 1];
        remaining[e][edges[e].plus] += cap;
        remaining[e][edges[e].minus] += cap;
    }

    std::map<std::vector<int>, Count> states{{std::vector<int>(k, 0), Count{1}}};
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::map<std::vector<int>, Count> next;
        const auto& rem = remaining[e + 1];
        for (const auto& [balance, ways] : states) {
            for (int t = 0; t <= cap; ++t) {
                std::vector<int> nb = balance;
                nb[edges[e].plus] += t;
                nb[edges[e].minus] -= t;
                if (std::abs(nb[edges[e].plus]) > rem[edges[e].plus] ||
                    std::abs(nb[edges[e].minus]) > rem[edges[e].minus])
                    continue;
                next[std::move(nb)] += ways;
            }
        }
        states = std::move(next);
    }

    Count total = 0;
    if (auto it = states.find(std::vector<int>(k, 0)); it != states.end()) total = it->second;
    for (int l = 0; l < loops; ++l) total *= static_cast<Count>(n);

    BigInt out = static_cast<std::uint64_t>(total >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(total);
    return out;
}

namespace {

constexpr int kFitStart = 8;
constexpr int kFitCheckPoints = 2;

BigInt factorial(int d) {
    BigInt f = 1;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

BigInt binomial(int a, int b) {
    BigInt r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

// order-th forward difference of f at offset start.
BigInt forward_difference(const std::vector<BigInt>& f, std::size_t start, int order) {
    BigInt acc = 0;
    for (int j = 0; j <= order; ++j) {
        BigInt term = binomial(order, j) * f[start + j];
        if ((order - j) % 2) acc -= term;
        else acc += term;
    }
    return acc;
}

// Leading coefficient of a degree-`degree` polynomial through counts at
// n = first, first+step, ...; nullopt if the extra points do not fit.
std::optional<Rational> fit_leading(const SetPartition& w, int degree, int first, int step) {
    std::vector<BigInt> f;
    for (int j = 0; j <= degree + kFitCheckPoints; ++j) f.push_back(lattice_count(w, first + step * j));
    for (int c = 0; c < kFitCheckPoints; ++c)
        if (forward_difference(f, c, degree + 1) != 0) return std::nullopt;
    BigInt denom = factorial(degree);
    for (int i = 0; i < degree; ++i) denom *= step;
    return Rational(forward_difference(f, 0, degree), denom);
}

}  // namespace

PartitionCoefficient vandermonde_coefficient(const SetPartition& w, CoefficientMethod method) {
    PartitionCoefficient out{w, Rational(1), 1.0, true, false};
    if (method == CoefficientMethod::NoncrossingShortcut && is_noncrossing(w)) return out;
    check_size(w.size());

    const int degree = w.size() - w.blocks() + 1;
    auto lead = fit_leading(w, degree, kFitStart, 1);
    if (!lead) {
        // Quasi-polynomial counts: restrict to even n.
        lead = fit_leading(w, degree, kFitStart, 2);
        out.used_even_fallback = true;
    }
    if (!lead)
        throw NumericalInstability("lattice counts of " + w.to_string() +
                                   " are not polynomial in n; exact fit failed on all and on even n");
    if (*lead <= 0 || *lead > 1)
        throw NumericalInstability("coefficient of " + w.to_string() + " = " + lead->str() + " lies outside (0,1]");
    out.exact_value = *lead;
    out.value = static_cast<double>(*lead);
    return out;
}

std::vector<PartitionCoefficient> coefficient_table(int p, CoefficientMethod method, Execution exec) {
    const auto parts = enumerate_partitions(p);
    std::vector<PartitionCoefficient> out(parts.size(), PartitionCoefficient{parts.front(), Rational(0), 0.0});
    for_each_index(parts.size(), exec, [&](std::size_t i) { out[i] = vandermonde_coefficient(parts[i], method); });
    return out;
}

const std::vector<PartitionCoefficient>& cached_coefficients(int p) {
    check_size(p);
    static std::array<std::once_flag, kMaxPartitionSize + 1> flags;
    static std::array<std::vector<PartitionCoefficient>, kMaxPartitionSize + 1> tables;
    std::call_once(flags[p], [p] { tables[p] = coefficient_table(p, CoefficientMethod::NoncrossingShortcut); });
    return tables[p];
}

}  // namespace vanspec
