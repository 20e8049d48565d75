#include "railload/load_estimator.hpp"

#include "railload/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace railload::estimator {

namespace {

constexpr const char* format_name = "railload-calibration";
constexpr int format_version = 1;

struct Block {
    double sum;     // weighted sum of values
    double weight;
    double count_sum;  // weighted sum of counts (calibration only)
    std::size_t first;
    std::size_t last;
    double mean() const { return sum / weight; }
};

// Pool adjacent violators for a nonincreasing fit; equal neighbours are
// pooled too so that block levels come out strictly decreasing.
std::vector<Block> pool(std::span<const double> values, std::span<const double> weights,
                        std::span<const double> counts) {
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        blocks.push_back({w * values[i], w, counts.empty() ? 0.0 : w * counts[i], i, i});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() <= blocks.back().mean()) {
            Block b = blocks.back();
            blocks.pop_back();
            auto& a = blocks.back();
            a.sum += b.sum;
            a.weight += b.weight;
            a.count_sum += b.count_sum;
            a.last = b.last;
        }
    }
    return blocks;
}

double feature_of(const CalibrationSample& s, std::string_view key) {
    const auto v = s.features.value(key);
    if (!v) throw InputError("features lack '" + std::string(key) + "'");
    return *v;
}

}  // namespace

void CalibrationModel::validate() const {
    if (feature_key.empty()) throw InputError("calibration model: empty feature_key");
    if (knots.size() < 2) throw InputError("calibration model: needs at least two knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].feature) || !std::isfinite(knots[i].count))
            throw InputError("calibration model: non-finite knot");
        if (i > 0 && !(knots[i].feature > knots[i - 1].feature && knots[i].count < knots[i - 1].count))
            throw InputError("calibration model: knots must increase in feature and decrease in count");
    }
    if (!(residual_sd >= 0.0) || !std::isfinite(residual_sd))
        throw InputError("calibration model: residual_sd must be >= 0");
    if (!(fit_range.first <= fit_range.second))
        throw InputError("calibration model: fit_range must be ordered");
}

std::vector<double> isotonic_nonincreasing(std::span<const double> values,
                                           std::span<const double> weights) {
    if (!weights.empty() && weights.size() != values.size())
        throw InputError("isotonic: weights and values differ in length");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw InputError("isotonic: weights must be > 0");
    for (double v : values)
        if (!std::isfinite(v)) throw InputError("isotonic: values must be finite");
    std::vector<double> out(values.size());
    for (const auto& b : pool(values, weights, {}))
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(b.first),
                  out.begin() + static_cast<std::ptrdiff_t>(b.last) + 1, b.mean());
    return out;
}

CalibrationModel calibrate(std::span<const CalibrationSample> samples, std::string_view feature_key) {
    if (samples.size() < 3) throw InputError("calibrate: needs at least 3 samples");
    std::map<int, std::pair<double, double>> by_count;  // count -> (feature sum, n)
    double f_min = 0.0, f_max = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.passenger_count < 0) throw InputError("calibrate: passenger counts must be >= 0");
        const double f = feature_of(s, feature_key);
        if (!std::isfinite(f)) throw InputError("calibrate: non-finite feature value");
        f_min = i == 0 ? f : std::min(f_min, f);
        f_max = i == 0 ? f : std::max(f_max, f);
        auto& slot = by_count[s.passenger_count];
        slot.first += f;
        slot.second += 1.0;
    }
    if (by_count.size() < 2) throw InputError("calibrate: needs at least 2 distinct counts");
    if (f_min == f_max) throw DegenerateFitError("calibrate: feature '" + std::string(feature_key) +
                                                 "' is identical in every sample");

    std::vector<double> means, weights, counts;
    for (const auto& [c, acc] : by_count) {
        means.push_back(acc.first / acc.second);
        weights.push_back(acc.second);
        counts.push_back(static_cast<double>(c));
    }
    const auto blocks = pool(means, weights, counts);
    if (blocks.size() < 2)
        throw DegenerateFitError("calibrate: feature '" + std::string(feature_key) +
                                 "' does not decrease with passenger count");

    CalibrationModel model;
    model.feature_key = std::string(feature_key);
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
        model.knots.push_back({it->mean(), it->count_sum / it->weight});
    model.fit_range = {model.knots.back().count, model.knots.front().count};

    std::vector<double> residuals;
    for (const auto& s : samples)
        residuals.push_back(estimate_load(model, feature_of(s, feature_key)).count - s.passenger_count);
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= static_cast<double>(residuals.size());
    double ss = 0.0;
    for (double r : residuals) ss += (r - mean) * (r - mean);
    model.residual_sd = std::sqrt(ss / static_cast<double>(residuals.size() - 1));
    model.validate();
    return model;
}

LoadEstimate estimate_load(const CalibrationModel& model, double feature) {
    model.validate();
    if (!std::isfinite(feature)) throw InputError("estimate_load: non-finite feature");
    const auto& k = model.knots;
    LoadEstimate e;
    if (feature < k.front().feature) {
        e.count = k.front().count;
        e.clamped = true;
    } else if (feature > k.back().feature) {
        e.count = k.back().count;
        e.clamped = true;
    } else {
        auto it = std::lower_bound(k.begin(), k.end(), feature,
                                   [](const Knot& a, double f) { return a.feature < f; });
        if (it->feature == feature) {
            e.count = it->count;
        } else {
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double t = (feature - lo.feature) / (hi.feature - lo.feature);
            e.count = lo.count + t * (hi.count - lo.count);
        }
    }
    e.lower = e.count - 2.0 * model.residual_sd;
    e.upper = e.count + 2.0 * model.residual_sd;
    return e;
}

LoadEstimate estimate_load(const CalibrationModel& model, const signal::FeatureVector& features) {
    const auto v = features.value(model.feature_key);
    if (!v) throw InputError("features lack the model's feature_key '" + model.feature_key + "'");
    return estimate_load(model, *v);
}

Metrics evaluate(const CalibrationModel& model, std::span<const CalibrationSample> samples) {
    if (samples.empty()) throw InputError("evaluate: empty sample set");
    Metrics m;
    m.n = samples.size();
    std::size_t w5 = 0, w10 = 0, w20 = 0;
    for (const auto& s : samples) {
        const double err = std::abs(estimate_load(model, s.features).count - s.passenger_count);
        m.mae += err;
        w5 += err <= 5.0;
        w10 += err <= 10.0;
        w20 += err <= 20.0;
    }
    const auto n = static_cast<double>(m.n);
    m.mae /= n;
    m.within_5 = static_cast<double>(w5) / n;
    m.within_10 = static_cast<double>(w10) / n;
    m.within_20 = static_cast<double>(w20) / n;
    return m;
}

std::string model_to_json(const CalibrationModel& model) {
    model.validate();
    nlohmann::json j;
    j["format"] = format_name;
    j["version"] = format_version;
    j["feature_key"] = model.feature_key;
    j["knots"] = nlohmann::json::array();
    for (const auto& k : model.knots) j["knots"].push_back({k.feature, k.count});
    j["residual_sd"] = model.residual_sd;
    j["fit_range"] = {model.fit_range.first, model.fit_range.second};
    return j.dump(2) + "\n";
}

CalibrationModel model_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format").get<std::string>() != format_name)
            throw FormatError("not a calibration model document");
        if (const int v = j.at("version").get<int>(); v != format_version)
            throw FormatError("unsupported calibration model version " + std::to_string(v));
        CalibrationModel m;
        m.feature_key = j.at("feature_key").get<std::string>();
        for (const auto& k : j.at("knots")) {
            if (!k.is_array() || k.size() != 2) throw FormatError("knots must be [feature, count] pairs");
            m.knots.push_back({k[0].get<double>(), k[1].get<double>()});
        }
        m.residual_sd = j.at("residual_sd").get<double>();
        const auto& r = j.at("fit_range");
        if (!r.is_array() || r.size() != 2) throw FormatError("fit_range must be [min, max]");
        m.fit_range = {r[0].get<double>(), r[1].get<double>()};
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("calibration model: ") + e.what());
    } catch (const InputError& e) {
        throw FormatError(e.what());
    }
}

}  // namespace railload::estimator
