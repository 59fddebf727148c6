#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vanspec/parallel.hpp"

namespace vanspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Largest ground-set size supported by enumeration and exact counting.
inline constexpr int kMaxPartitionSize = 7;

/// Raised when the exact polynomial fit of lattice counts does not close.
class NumericalInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A partition of {1..p}, stored as the block index of every element.
///
/// Labels are canonical: block indices run 1..k and are numbered by first
/// occurrence, so two partitions are equal iff their label sequences are.
class SetPartition {
public:
    /// Canonicalizes an arbitrary labelling (any integers, equal = same block).
    static SetPartition from_labels(std::span<const int> labels);
    /// Parses "{1,3}{2,4}".
    static SetPartition parse(const std::string& text);

    int size() const { return static_cast<int>(labels_.size()); }
    int blocks() const { return k_; }
    /// 1-based block index of 1-based element i.
    int block_of(int i) const { return labels_[i - 1]; }
    const std::vector<int>& labels() const { return labels_; }

    /// Blocks as sorted 1-based element lists, in canonical block order.
    std::vector<std::vector<int>> block_lists() const;
    /// "{1,3}{2,4}"
    std::string to_string() const;

    /// Rotates the element sequence one step (element i+1 takes the label of
    /// element i, indices mod p) and re-canonicalizes.
    SetPartition rotated() const;

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
    friend auto operator<=>(const SetPartition& a, const SetPartition& b) { return a.labels_ <=> b.labels_; }

private:
    explicit SetPartition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {}
    std::vector<int> labels_;
    int k_ = 0;
};

/// All partitions of {1..p}, or only those with exactly `k` blocks when k > 0.
/// Order is lexicographic in the canonical labels.
std::vector<SetPartition> enumerate_partitions(int p, int k = 0);

/// True iff no a<b<c<d with w_a = w_c != w_b = w_d.
bool is_noncrossing(const SetPartition& w);

/// Number of t in {0..n-1}^p such that, for every block b,
/// sum_{i: w_i=b} t_i - sum_{i: w_{i+1}=b} t_i = 0 (indices mod p).
BigInt lattice_count(const SetPartition& w, int n);

enum class CoefficientMethod { NoncrossingShortcut, ExtrapolatedCount };

struct PartitionCoefficient {
    SetPartition partition;
    Rational exact_value;
    double value = 0.0;
    bool exact = true;
    bool used_even_fallback = false;
};

/// Leading coefficient of lattice_count(w, n) in n^{p-k+1}.
PartitionCoefficient vandermonde_coefficient(const SetPartition& w,
                                             CoefficientMethod method = CoefficientMethod::NoncrossingShortcut);

/// Coefficients for every partition of {1..p}; partitions are independent so
/// the parallel path is a plain loop split.
std::vector<PartitionCoefficient> coefficient_table(int p, CoefficientMethod method, Execution exec = Execution::Parallel);

/// Process-wide, initialize-once view of coefficient_table(p, NoncrossingShortcut).
const std::vector<PartitionCoefficient>& cached_coefficients(int p);

}  // namespace vanspec
