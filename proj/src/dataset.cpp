#include "fairenc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fairenc/rng.hpp"

namespace fairenc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

long long nearest_int(double x) { return std::llround(x); }

}  // namespace

double CategoryStatistics::prior() const {
    if (total_rows == 0) throw std::runtime_error("category_stats: no rows");
    return static_cast<double>(total_positives) / static_cast<double>(total_rows);
}

const CategoryCount* CategoryStatistics::find(const std::string& value) const {
    for (const auto& c : categories)
        if (c.value == value) return &c;
    return nullptr;
}

int Dataset::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < schema_.size(); ++i)
        if (schema_[i].name == name) return static_cast<int>(i);
    return -1;
}

int Dataset::require_column(const std::string& name) const {
    int idx = column_index(name);
    if (idx < 0) throw std::runtime_error("dataset: unknown column '" + name + "'");
    return idx;
}

int Dataset::target_index() const {
    for (std::size_t i = 0; i < schema_.size(); ++i)
        if (schema_[i].kind == ColumnKind::target) return static_cast<int>(i);
    throw std::runtime_error("dataset: no target column");
}

void Dataset::check_kind(int col, ColumnKind kind) const {
    if (col < 0 || static_cast<std::size_t>(col) >= schema_.size())
        throw std::out_of_range("dataset: column index out of range");
    if (schema_[col].kind != kind)
        throw std::runtime_error("dataset: column '" + schema_[col].name + "' has the wrong kind");
}

const std::vector<std::int32_t>& Dataset::codes(int col) const {
    check_kind(col, ColumnKind::categorical);
    return cols_[col].codes;
}

const std::vector<std::string>& Dataset::dictionary(int col) const {
    check_kind(col, ColumnKind::categorical);
    return cols_[col].dict;
}

const std::string& Dataset::category_at(int col, std::size_t row) const {
    const auto& c = codes(col);
    if (row >= c.size()) throw std::out_of_range("dataset: row index out of range");
    return cols_[col].dict[c[row]];
}

const std::vector<double>& Dataset::numeric(int col) const {
    check_kind(col, ColumnKind::numeric);
    return cols_[col].values;
}

const std::vector<std::uint8_t>& Dataset::target() const {
    return cols_[target_index()].bits;
}

void Dataset::set_role(int col, ColumnRole role) {
    if (col < 0 || static_cast<std::size_t>(col) >= schema_.size())
        throw std::out_of_range("dataset: column index out of range");
    if (schema_[col].kind == ColumnKind::target && role != ColumnRole::target)
        throw std::runtime_error("dataset: target column role cannot change");
    schema_[col].role = role;
}

DatasetBuilder& DatasetBuilder::categorical(const std::string& name, ColumnRole role,
                                            const std::vector<std::string>& values) {
    Dataset::Column col;
    std::unordered_map<std::string, std::int32_t> lookup;
    col.codes.reserve(values.size());
    for (const auto& v : values) {
        auto it = lookup.find(v);
        if (it == lookup.end()) {
            it = lookup.emplace(v, static_cast<std::int32_t>(col.dict.size())).first;
            col.dict.push_back(v);
        }
        col.codes.push_back(it->second);
    }
    out_.schema_.push_back({name, ColumnKind::categorical, role});
    out_.cols_.push_back(std::move(col));
    return *this;
}

DatasetBuilder& DatasetBuilder::numeric(const std::string& name, ColumnRole role,
                                        std::vector<double> values) {
    Dataset::Column col;
    col.values = std::move(values);
    out_.schema_.push_back({name, ColumnKind::numeric, role});
    out_.cols_.push_back(std::move(col));
    return *this;
}

DatasetBuilder& DatasetBuilder::target(const std::string& name, std::vector<std::uint8_t> values) {
    Dataset::Column col;
    col.bits = std::move(values);
    out_.schema_.push_back({name, ColumnKind::target, ColumnRole::target});
    out_.cols_.push_back(std::move(col));
    return *this;
}

Dataset DatasetBuilder::build() {
    if (out_.schema_.empty()) throw std::runtime_error("dataset: no columns");
    int targets = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < out_.schema_.size(); ++i) {
        const auto& col = out_.cols_[i];
        std::size_t len = 0;
        switch (out_.schema_[i].kind) {
            case ColumnKind::categorical: len = col.codes.size(); break;
            case ColumnKind::numeric: len = col.values.size(); break;
            case ColumnKind::target:
                len = col.bits.size();
                ++targets;
                break;
        }
        if (i == 0) n = len;
        if (len != n) throw std::runtime_error("dataset: column length mismatch");
        for (std::size_t j = i + 1; j < out_.schema_.size(); ++j)
            if (out_.schema_[i].name == out_.schema_[j].name)
                throw std::runtime_error("dataset: duplicate column name '" + out_.schema_[i].name + "'");
    }
    if (targets != 1) throw std::runtime_error("dataset: exactly one target column required");
    if (n == 0) throw std::runtime_error("dataset: empty (no rows)");
    out_.row_count_ = n;
    return std::move(out_);
}

Dataset load_csv(const std::string& path, const std::vector<ColumnSchema>& schema) {
    if (schema.empty()) throw std::invalid_argument("load_csv: empty schema");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file '" + path + "'");
    auto header = split_line(line);
    if (header.size() != schema.size())
        throw std::runtime_error("load_csv: header has " + std::to_string(header.size()) +
                                 " columns, schema declares " + std::to_string(schema.size()));
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (header[i] != schema[i].name)
            throw std::runtime_error("load_csv: header mismatch at column " + std::to_string(i) +
                                     ": got '" + header[i] + "', expected '" + schema[i].name + "'");

    std::vector<std::vector<std::string>> cat_values(schema.size());
    std::vector<std::vector<double>> num_values(schema.size());
    std::vector<std::vector<std::uint8_t>> bit_values(schema.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (line.find('"') != std::string::npos)
            throw std::runtime_error("load_csv: quoted fields are not supported (row " +
                                     std::to_string(row + 1) + ")");
        auto cells = split_line(line);
        if (cells.size() != schema.size())
            throw std::runtime_error("load_csv: row " + std::to_string(row + 1) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(schema.size()));
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const std::string& cell = cells[i];
            switch (schema[i].kind) {
                case ColumnKind::categorical: {
                    if (cell.empty())
                        throw std::runtime_error("load_csv: empty categorical cell in column '" +
                                                 schema[i].name + "', row " + std::to_string(row + 1));
                    if (cell.find('|') != std::string::npos)
                        throw std::runtime_error("load_csv: token '" + cell +
                                                 "' contains reserved separator '|' (column '" +
                                                 schema[i].name + "')");
                    cat_values[i].push_back(cell);
                    break;
                }
                case ColumnKind::numeric: {
                    double v = 0;
                    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                    if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v))
                        throw std::runtime_error("load_csv: unparseable numeric cell '" + cell +
                                                 "' in column '" + schema[i].name + "', row " +
                                                 std::to_string(row + 1));
                    num_values[i].push_back(v);
                    break;
                }
                case ColumnKind::target: {
                    if (cell == "0")
                        bit_values[i].push_back(0);
                    else if (cell == "1")
                        bit_values[i].push_back(1);
                    else
                        throw std::runtime_error("load_csv: unparseable target cell '" + cell +
                                                 "', row " + std::to_string(row + 1) +
                                                 " (must be 0 or 1)");
                    break;
                }
            }
        }
        ++row;
    }
    if (row == 0) throw std::runtime_error("load_csv: empty file '" + path + "' (no data rows)");

    DatasetBuilder b;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        switch (schema[i].kind) {
            case ColumnKind::categorical:
                b.categorical(schema[i].name, schema[i].role, cat_values[i]);
                break;
            case ColumnKind::numeric:
                b.numeric(schema[i].name, schema[i].role, std::move(num_values[i]));
                break;
            case ColumnKind::target:
                b.target(schema[i].name, std::move(bit_values[i]));
                break;
        }
    }
    return b.build();
}

CategoryStatistics category_stats(const Dataset& data, const std::string& attribute) {
    int col = data.require_column(attribute);
    const auto& codes = data.codes(col);
    const auto& dict = data.dictionary(col);
    const auto& y = data.target();

    CategoryStatistics stats;
    stats.attribute = attribute;
    stats.total_rows = data.rows();
    // first-appearance order of this dataset's rows, independent of the
    // dictionary order inherited from a parent dataset
    std::vector<int> slot(dict.size(), -1);
    for (std::size_t r = 0; r < codes.size(); ++r) {
        std::int32_t c = codes[r];
        if (slot[c] < 0) {
            slot[c] = static_cast<int>(stats.categories.size());
            stats.categories.push_back({dict[c], 0, 0});
        }
        auto& entry = stats.categories[slot[c]];
        ++entry.count;
        entry.positives += y[r];
        stats.total_positives += y[r];
    }
    return stats;
}

SplitResult stratified_split(const Dataset& data, double train_fraction,
                             const std::string& stratify_by, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("stratified_split: fraction must lie in (0,1)");
    int col = data.require_column(stratify_by);
    const auto& codes = data.codes(col);
    const auto& y = data.target();

    // rows per category in first-appearance category order
    std::vector<int> slot(data.dictionary(col).size(), -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < codes.size(); ++r) {
        if (slot[codes[r]] < 0) {
            slot[codes[r]] = static_cast<int>(members.size());
            members.emplace_back();
        }
        members[slot[codes[r]]].push_back(r);
    }

    std::vector<std::uint8_t> in_train(data.rows(), 0);
    for (std::size_t g = 0; g < members.size(); ++g) {
        const auto& rows = members[g];
        const long long n_i = static_cast<long long>(rows.size());
        long long k = (n_i == 1) ? 1 : nearest_int(train_fraction * static_cast<double>(n_i));
        k = std::clamp(k, 0LL, n_i);

        std::vector<std::size_t> pos, neg;
        for (std::size_t r : rows) (y[r] ? pos : neg).push_back(r);
        const long long n_pos = static_cast<long long>(pos.size());
        const long long n_neg = static_cast<long long>(neg.size());
        long long k_pos = nearest_int(train_fraction * static_cast<double>(n_pos));
        k_pos = std::clamp(k_pos, std::max(0LL, k - n_neg), std::min(k, n_pos));
        const long long k_neg = k - k_pos;

        auto rng = make_rng(seed, g);
        std::shuffle(pos.begin(), pos.end(), rng);
        std::shuffle(neg.begin(), neg.end(), rng);
        for (long long i = 0; i < k_pos; ++i) in_train[pos[i]] = 1;
        for (long long i = 0; i < k_neg; ++i) in_train[neg[i]] = 1;
    }

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < data.rows(); ++r)
        (in_train[r] ? train_rows : test_rows).push_back(r);
    if (train_rows.empty() || test_rows.empty())
        throw std::runtime_error("stratified_split: a split side is empty; adjust fraction or data");
    return {select_rows(data, train_rows), select_rows(data, test_rows)};
}

Dataset concat_attributes(const Dataset& data, const std::vector<std::string>& attributes,
                          const std::string& new_name) {
    if (attributes.empty()) throw std::invalid_argument("concat_attributes: no attributes given");
    if (data.column_index(new_name) >= 0)
        throw std::runtime_error("concat_attributes: column '" + new_name + "' already exists");
    std::vector<int> cols;
    for (const auto& a : attributes) {
        int c = data.require_column(a);
        if (data.schema()[c].kind != ColumnKind::categorical)
            throw std::runtime_error("concat_attributes: column '" + a + "' is not categorical");
        cols.push_back(c);
    }

    std::vector<std::string> joined(data.rows());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        std::string v;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) v += '|';
            v += data.category_at(cols[i], r);
        }
        joined[r] = std::move(v);
    }

    DatasetBuilder b;
    for (std::size_t i = 0; i < data.schema().size(); ++i) {
        const auto& s = data.schema()[i];
        bool demote = std::find(cols.begin(), cols.end(), static_cast<int>(i)) != cols.end();
        ColumnRole role = demote ? ColumnRole::ignored : s.role;
        switch (s.kind) {
            case ColumnKind::categorical: {
                std::vector<std::string> vals(data.rows());
                for (std::size_t r = 0; r < data.rows(); ++r) vals[r] = data.category_at(i, r);
                b.categorical(s.name, role, vals);
                break;
            }
            case ColumnKind::numeric:
                b.numeric(s.name, role, data.numeric(i));
                break;
            case ColumnKind::target:
                b.target(s.name, data.target());
                break;
        }
    }
    b.categorical(new_name, ColumnRole::protected_attribute, joined);
    return b.build();
}

Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw std::invalid_argument("select_rows: empty selection");
    Dataset out;
    out.schema_ = data.schema_;
    out.row_count_ = rows.size();
    out.cols_.resize(data.cols_.size());
    for (std::size_t c = 0; c < data.cols_.size(); ++c) {
        const auto& src = data.cols_[c];
        auto& dst = out.cols_[c];
        switch (data.schema_[c].kind) {
            case ColumnKind::categorical:
                dst.dict = src.dict;
                dst.codes.reserve(rows.size());
                for (std::size_t r : rows) dst.codes.push_back(src.codes.at(r));
                break;
            case ColumnKind::numeric:
                dst.values.reserve(rows.size());
                for (std::size_t r : rows) dst.values.push_back(src.values.at(r));
                break;
            case ColumnKind::target:
                dst.bits.reserve(rows.size());
                for (std::size_t r : rows) dst.bits.push_back(src.bits.at(r));
                break;
        }
    }
    return out;
}

double prevalence(const Dataset& data) {
    const auto& y = data.target();
    std::size_t pos = std::accumulate(y.begin(), y.end(), std::size_t{0});
    return static_cast<double>(pos) / static_cast<double>(y.size());
}

}  // namespace fairenc
