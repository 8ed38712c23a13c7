#include "fairenc/encoders.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fairenc/rng.hpp"

namespace fairenc {

namespace {

void validate(const EncoderConfig& c) {
    if (c.smoothing_m < 0.0 || !std::isfinite(c.smoothing_m))
        throw std::invalid_argument("encoder: smoothing_m must be finite and >= 0");
    if (c.gaussian_lambda < 0.0 || !std::isfinite(c.gaussian_lambda))
        throw std::invalid_argument("encoder: gaussian_lambda must be finite and >= 0");
    if (c.smoothing_m > 0.0 && c.gaussian_lambda > 0.0)
        throw std::invalid_argument("encoder: smoothing and Gaussian regularization are exclusive");
    if (c.method != EncoderMethod::target && (c.smoothing_m > 0.0 || c.gaussian_lambda > 0.0))
        throw std::invalid_argument("encoder: regularization applies to the target method only");
}

double smoothed_value(double n_i, double p_hat, double prior, double m) {
    const double lambda = n_i / (n_i + m);
    return lambda * p_hat + (1.0 - lambda) * prior;
}

}  // namespace

Encoder Encoder::fit(const EncoderConfig& config, const Dataset& train,
                     const std::string& attribute) {
    validate(config);
    int col = train.require_column(attribute);
    if (train.schema()[col].kind != ColumnKind::categorical)
        throw std::runtime_error("encoder: column '" + attribute + "' is not categorical");

    Encoder e;
    e.config_ = config;
    e.attribute_ = attribute;
    e.stats_ = category_stats(train, attribute);
    e.prior_ = e.stats_.prior();
    e.values_.resize(e.stats_.categories.size(), 0.0);
    for (std::size_t i = 0; i < e.stats_.categories.size(); ++i) {
        const auto& cat = e.stats_.categories[i];
        e.slots_.emplace(cat.value, static_cast<int>(i));
        switch (config.method) {
            case EncoderMethod::target: {
                const double n_i = static_cast<double>(cat.count);
                const double p_hat = static_cast<double>(cat.positives) / n_i;
                e.values_[i] = (config.smoothing_m > 0.0)
                                   ? smoothed_value(n_i, p_hat, e.prior_, config.smoothing_m)
                                   : p_hat;
                break;
            }
            case EncoderMethod::ordinal:
                e.values_[i] = static_cast<double>(i);
                break;
            case EncoderMethod::one_hot:
            case EncoderMethod::drop:
                break;
        }
    }
    return e;
}

Encoder Encoder::from_values(const std::string& attribute,
                             const std::vector<std::pair<std::string, double>>& values,
                             double prior) {
    if (values.empty()) throw std::invalid_argument("encoder: no values given");
    Encoder e;
    e.config_.method = EncoderMethod::target;
    e.attribute_ = attribute;
    e.prior_ = prior;
    e.stats_.attribute = attribute;
    for (const auto& [name, v] : values) {
        if (e.slots_.count(name))
            throw std::invalid_argument("encoder: duplicate category '" + name + "'");
        e.slots_.emplace(name, static_cast<int>(e.values_.size()));
        e.stats_.categories.push_back({name, 0, 0});
        e.values_.push_back(v);
    }
    return e;
}

bool Encoder::outside_recommended_range() const {
    return config_.gaussian_lambda > 5.0 || config_.smoothing_m > 1e6;
}

int Encoder::category_slot(const std::string& category) const {
    auto it = slots_.find(category);
    return it == slots_.end() ? -1 : it->second;
}

double Encoder::encoded_value(const std::string& category) const {
    if (config_.method != EncoderMethod::target && config_.method != EncoderMethod::ordinal)
        throw std::runtime_error("encoder: encoded_value applies to target/ordinal modes");
    int slot = category_slot(category);
    return slot < 0 ? prior_ : values_[slot];
}

std::vector<double> Encoder::encode_unseen() const {
    switch (config_.method) {
        case EncoderMethod::target:
        case EncoderMethod::ordinal:
            return {prior_};
        case EncoderMethod::one_hot:
            return std::vector<double>(stats_.categories.size(), 0.0);
        case EncoderMethod::drop:
            return {};
    }
    return {};
}

double encode_smoothed(const Encoder& encoder, const std::string& category, double m) {
    if (m < 0.0 || !std::isfinite(m))
        throw std::invalid_argument("encode_smoothed: m must be finite and >= 0");
    if (encoder.config().method != EncoderMethod::target)
        throw std::runtime_error("encode_smoothed: encoder is not in target mode");
    const CategoryCount* cat = encoder.stats().find(category);
    if (cat == nullptr || cat->count == 0) return encoder.prior();
    const double n_i = static_cast<double>(cat->count);
    const double p_hat = static_cast<double>(cat->positives) / n_i;
    return smoothed_value(n_i, p_hat, encoder.prior(), m);
}

FeatureMatrix transform(const Encoder& encoder, const Dataset& data,
                        const std::string& attribute, Phase phase, Exec exec) {
    if (attribute != encoder.attribute())
        throw std::runtime_error("transform: encoder was fitted on '" + encoder.attribute() +
                                 "', not '" + attribute + "'");
    const int col = data.require_column(attribute);
    if (data.schema()[col].kind != ColumnKind::categorical)
        throw std::runtime_error("transform: column '" + attribute + "' is not categorical");

    std::vector<int> passthrough;
    for (std::size_t i = 0; i < data.schema().size(); ++i) {
        const auto& s = data.schema()[i];
        if (static_cast<int>(i) == col) continue;
        if (s.role != ColumnRole::feature) continue;
        if (s.kind == ColumnKind::categorical)
            throw std::runtime_error(
                "transform: categorical feature column '" + s.name +
                "' is not the encoded attribute; set its role to ignored or protected");
        if (s.kind == ColumnKind::numeric) passthrough.push_back(static_cast<int>(i));
    }

    const auto method = encoder.config().method;
    const std::size_t n = data.rows();
    const std::size_t c = encoder.stats().categories.size();
    std::size_t enc_cols = 0;
    FeatureMatrix out;
    switch (method) {
        case EncoderMethod::target:
        case EncoderMethod::ordinal:
            enc_cols = 1;
            out.names.push_back(attribute);
            break;
        case EncoderMethod::one_hot:
            enc_cols = c;
            for (const auto& cat : encoder.stats().categories)
                out.names.push_back(attribute + "=" + cat.value);
            break;
        case EncoderMethod::drop:
            break;
    }
    for (int p : passthrough) out.names.push_back(data.schema()[p].name);

    out.rows = n;
    out.cols = enc_cols + passthrough.size();
    out.values.assign(out.rows * out.cols, 0.0);

    // map the column's dictionary codes onto encoder slots once
    const auto& dict = data.dictionary(col);
    std::vector<int> dict_slot(dict.size());
    for (std::size_t d = 0; d < dict.size(); ++d) dict_slot[d] = encoder.category_slot(dict[d]);
    const auto& codes = data.codes(col);

    const bool noisy = phase == Phase::train && method == EncoderMethod::target &&
                       encoder.config().gaussian_lambda > 0.0;
    const double lambda = encoder.config().gaussian_lambda;
    const std::uint64_t noise_seed = encoder.config().noise_seed;

    parallel_for(n, exec, [&](std::size_t r) {
        double* row = out.values.data() + r * out.cols;
        const int slot = dict_slot[codes[r]];
        switch (method) {
            case EncoderMethod::target:
            case EncoderMethod::ordinal: {
                double v = slot < 0 ? encoder.prior_ : encoder.values_[slot];
                if (noisy) {
                    auto rng = make_rng(noise_seed, r);
                    v += std::normal_distribution<double>(0.0, lambda)(rng);
                }
                row[0] = v;
                break;
            }
            case EncoderMethod::one_hot:
                if (slot >= 0) row[slot] = 1.0;
                break;
            case EncoderMethod::drop:
                break;
        }
        for (std::size_t p = 0; p < passthrough.size(); ++p)
            row[enc_cols + p] = data.numeric(passthrough[p])[r];
    });
    return out;
}

}  // namespace fairenc
