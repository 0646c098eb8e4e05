#include "fwsvm/dataset.hpp"
#include "fwsvm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

namespace fwsvm {

namespace {

bool parse_double(const std::string& field, double& out) {
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t' || *(e - 1) == '\r')) --e;
    if (b == e) return false;
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e && std::isfinite(out);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ','))
        fields.push_back(cur);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

} // namespace

std::vector<RawRecord> parse_csv(std::istream& in) {
    std::vector<RawRecord> records;
    std::string line;
    int line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        auto fields = split_line(line);
        if (first_content_line) {
            first_content_line = false;
            double probe;
            if (!fields.empty() && !parse_double(fields[0], probe))
                continue; // header line
        }
        if (fields.size() != kPimaFeatureCount + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected 9 fields, got " +
                             std::to_string(fields.size()));
        RawRecord rec{};
        for (int j = 0; j < kPimaFeatureCount; ++j) {
            if (!parse_double(fields[j], rec.features[j]))
                throw ParseError("line " + std::to_string(line_no) + ": field " +
                                 std::to_string(j + 1) + " is not numeric: '" + fields[j] + "'");
        }
        double lab;
        if (!parse_double(fields[kPimaFeatureCount], lab))
            throw ParseError("line " + std::to_string(line_no) + ": label is not numeric");
        if (lab != 0.0 && lab != 1.0)
            throw ParseError("line " + std::to_string(line_no) + ": label must be 0 or 1");
        rec.label = static_cast<int>(lab);
        records.push_back(rec);
    }
    return records;
}

std::vector<RawRecord> parse_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open input file: " + path);
    return parse_csv(in);
}

SampleMatrix to_matrix(const std::vector<RawRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("to_matrix: empty record list");
    SampleMatrix m;
    m.X.resize(static_cast<Eigen::Index>(records.size()), kPimaFeatureCount);
    m.y.resize(static_cast<Eigen::Index>(records.size()));
    for (Eigen::Index i = 0; i < m.X.rows(); ++i) {
        const auto& rec = records[static_cast<std::size_t>(i)];
        for (int j = 0; j < kPimaFeatureCount; ++j)
            m.X(i, j) = rec.features[static_cast<std::size_t>(j)];
        m.y[i] = rec.label == 1 ? 1.0 : -1.0;
    }
    return m;
}

std::vector<FeatureStats> summary_stats(const SampleMatrix& m) {
    if (m.n() < 1)
        throw std::invalid_argument("summary_stats: n >= 1 required");
    std::vector<FeatureStats> stats;
    stats.reserve(static_cast<std::size_t>(m.d()));
    const double n = static_cast<double>(m.n());
    for (Eigen::Index j = 0; j < m.d(); ++j) {
        const auto col = m.X.col(j);
        FeatureStats s{};
        s.mean = col.mean();
        s.stddev = m.n() > 1 ? std::sqrt((col.array() - s.mean).square().sum() / (n - 1.0)) : 0.0;
        s.min = col.minCoeff();
        s.max = col.maxCoeff();
        stats.push_back(s);
    }
    return stats;
}

StandardizationParams standardize_fit(const SampleMatrix& m) {
    if (m.n() < 2)
        throw std::invalid_argument("standardize_fit: n >= 2 required");
    StandardizationParams p;
    p.means = m.X.colwise().mean();
    p.stds.resize(m.d());
    for (Eigen::Index j = 0; j < m.d(); ++j) {
        p.stds[j] = std::sqrt((m.X.col(j).array() - p.means[j]).square().mean());
        if (p.stds[j] <= 0.0)
            throw std::invalid_argument("standardize_fit: column " + std::to_string(j) +
                                        " is constant (zero variance)");
    }
    return p;
}

SampleMatrix standardize_apply(const StandardizationParams& params, const SampleMatrix& m) {
    if (params.means.size() != m.d())
        throw std::invalid_argument("standardize_apply: dimension mismatch");
    SampleMatrix out;
    out.X = (m.X.rowwise() - params.means.transpose()).array().rowwise() /
            params.stds.transpose().array();
    out.y = m.y;
    return out;
}

FoldPlan stratified_kfold(const Vector& y, int k, std::uint64_t seed) {
    const Eigen::Index n = y.size();
    if (k < 2)
        throw std::invalid_argument("stratified_kfold: k >= 2 required");
    if (static_cast<Eigen::Index>(k) > n)
        throw std::invalid_argument("stratified_kfold: k > n");
    std::vector<Eigen::Index> pos, neg;
    for (Eigen::Index i = 0; i < n; ++i)
        (y[i] > 0 ? pos : neg).push_back(i);
    for (const auto* cls : {&pos, &neg}) {
        if (!cls->empty() && cls->size() < static_cast<std::size_t>(k))
            throw std::invalid_argument("stratified_kfold: a class has fewer than k members");
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(n), -1);

    auto rng = make_rng(derive_seed(seed, "stratified_kfold"));
    for (auto* cls : {&pos, &neg}) {
        std::shuffle(cls->begin(), cls->end(), rng);
        for (std::size_t r = 0; r < cls->size(); ++r)
            plan.assignments[static_cast<std::size_t>((*cls)[r])] = static_cast<int>(r % k);
    }
    return plan;
}

SampleMatrix fold_subset(const SampleMatrix& m, const FoldPlan& plan, int fold, bool test_part) {
    if (plan.assignments.size() != static_cast<std::size_t>(m.n()))
        throw std::invalid_argument("fold_subset: plan/sample size mismatch");
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < m.n(); ++i) {
        const bool in_fold = plan.assignments[static_cast<std::size_t>(i)] == fold;
        if (in_fold == test_part)
            rows.push_back(i);
    }
    SampleMatrix out;
    out.X.resize(static_cast<Eigen::Index>(rows.size()), m.d());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (Eigen::Index r = 0; r < out.n(); ++r) {
        out.X.row(r) = m.X.row(rows[static_cast<std::size_t>(r)]);
        out.y[r] = m.y[rows[static_cast<std::size_t>(r)]];
    }
    return out;
}

} // namespace fwsvm
