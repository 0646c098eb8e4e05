#pragma once

#include "fwsvm/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fwsvm {

inline constexpr int kPimaFeatureCount = 8;

/// One row of the Pima CSV: 8 clinical features plus a {0,1} label.
struct RawRecord {
    std::array<double, kPimaFeatureCount> features;
    int label; // 0 or 1
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the 9-field Pima CSV layout. A single leading header line is
/// skipped when its first field is non-numeric. Errors carry line numbers.
std::vector<RawRecord> parse_csv(std::istream& in);
std::vector<RawRecord> parse_csv_file(const std::string& path);

/// Label mapping: 1 (diabetic, "positive") -> +1, 0 -> -1.
SampleMatrix to_matrix(const std::vector<RawRecord>& records);

struct FeatureStats {
    double mean;
    double stddev;
    double min;
    double max;
};

/// Per-column mean / standard deviation / min / max. The standard deviation
/// uses the n-1 denominator; that is what reproduces the published dataset
/// table at one decimal (the 1/n variant rounds columns 3 and 4 differently).
std::vector<FeatureStats> summary_stats(const SampleMatrix& m);

struct StandardizationParams {
    Vector means;
    Vector stds; // population (1/n) standard deviation
};

/// Column means and population stds. Throws if any column is constant.
StandardizationParams standardize_fit(const SampleMatrix& m);

SampleMatrix standardize_apply(const StandardizationParams& params, const SampleMatrix& m);

struct FoldPlan {
    int k;
    std::vector<int> assignments; // fold index per sample, in [0, k)
    std::uint64_t seed;
};

/// Deterministic stratified k-fold assignment: per-class counts per fold
/// differ by at most one.
FoldPlan stratified_kfold(const Vector& y, int k, std::uint64_t seed);

/// Rows of `m` whose fold assignment equals (test) / differs from (train) `fold`.
SampleMatrix fold_subset(const SampleMatrix& m, const FoldPlan& plan, int fold, bool test_part);

} // namespace fwsvm
