#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairenc {

enum class ColumnKind { categorical, numeric, target };
enum class ColumnRole { feature, protected_attribute, target, ignored };

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
    ColumnRole role = ColumnRole::feature;
};

/// Names the audited attribute and the category every disparity is measured
/// against.
struct GroupSpec {
    std::string attribute;
    std::string reference;
};

struct CategoryCount {
    std::string value;
    std::size_t count = 0;      // n_i
    std::size_t positives = 0;  // n_i,Y   rows of the category with target 1
};

/// Per-category counts for one attribute, categories listed in order of first
/// appearance in the row sequence they were computed from.
struct CategoryStatistics {
    std::string attribute;
    std::vector<CategoryCount> categories;
    std::size_t total_rows = 0;
    std::size_t total_positives = 0;

    double prior() const;  // global target rate n_Y / n
    const CategoryCount* find(const std::string& value) const;
};

/// In-memory table with typed columns: categorical columns store codes into a
/// per-column dictionary, numeric columns store doubles, and exactly one
/// binary target column stores 0/1 labels.
class Dataset {
public:
    std::size_t rows() const { return row_count_; }
    std::size_t columns() const { return schema_.size(); }
    const std::vector<ColumnSchema>& schema() const { return schema_; }

    int column_index(const std::string& name) const;  // -1 when absent
    int require_column(const std::string& name) const;
    int target_index() const;

    const std::vector<std::int32_t>& codes(int col) const;
    const std::vector<std::string>& dictionary(int col) const;
    const std::string& category_at(int col, std::size_t row) const;
    const std::vector<double>& numeric(int col) const;
    const std::vector<std::uint8_t>& target() const;

    void set_role(int col, ColumnRole role);

private:
    friend class DatasetBuilder;
    friend Dataset select_rows(const Dataset&, const std::vector<std::size_t>&);

    struct Column {
        std::vector<std::int32_t> codes;
        std::vector<std::string> dict;
        std::vector<double> values;
        std::vector<std::uint8_t> bits;
    };

    std::vector<ColumnSchema> schema_;
    std::vector<Column> cols_;
    std::size_t row_count_ = 0;

    void check_kind(int col, ColumnKind kind) const;
};

/// Assembles a Dataset column by column; build() checks that all columns have
/// the same length, at least one row exists and exactly one target is present.
class DatasetBuilder {
public:
    DatasetBuilder& categorical(const std::string& name, ColumnRole role,
                                const std::vector<std::string>& values);
    DatasetBuilder& numeric(const std::string& name, ColumnRole role,
                            std::vector<double> values);
    DatasetBuilder& target(const std::string& name, std::vector<std::uint8_t> values);
    Dataset build();

private:
    Dataset out_;
};

/// Reads a comma-separated file with a header row against a declared schema.
/// Header names must match the schema in order.  Cells are whitespace-trimmed;
/// quoted fields are rejected, categorical tokens must be non-empty and free
/// of '|', numeric cells must parse to finite doubles and target cells must be
/// exactly "0" or "1".
Dataset load_csv(const std::string& path, const std::vector<ColumnSchema>& schema);

/// Counts rows and positives per category of `attribute`, enumerating
/// categories in first-appearance row order of `data` itself.
CategoryStatistics category_stats(const Dataset& data, const std::string& attribute);

struct SplitResult {
    Dataset train;
    Dataset test;
};

/// Splits rows into train/test keeping both the per-category row share and the
/// per-category label mix as close to `train_fraction` as rounding allows.
/// Per category the train share is the nearest integer to fraction * n_i, with
/// positives allocated by the same rounding (clamped to feasibility) and the
/// remainder going to test.  Categories with a single row go to train.  Row
/// selection within a category is randomized from (seed, category index), and
/// both outputs preserve the original row order.
SplitResult stratified_split(const Dataset& data, double train_fraction,
                             const std::string& stratify_by, std::uint64_t seed);

/// Adds a categorical column whose value is the '|'-joined tuple of the given
/// attributes, marking it protected and demoting the source columns to
/// ignored in the returned copy.
Dataset concat_attributes(const Dataset& data, const std::vector<std::string>& attributes,
                          const std::string& new_name);

/// Projection onto a subset of rows (original order of `rows` kept, column
/// dictionaries carried over unchanged).
Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows);

/// Global target rate of a dataset.
double prevalence(const Dataset& data);

}  // namespace fairenc
