#include "crrd/json_io.hpp"

#include <stdexcept>

namespace crrd::io {

using nlohmann::json;

json to_json(const prob::JointSource& source) {
    json doc;
    doc["alphabets"] = source.pmf().sizes();
    doc["labels"] = json::array();
    for (const auto& names : source.labels()) doc["labels"].push_back(names);
    doc["pmf"] = std::vector<double>(source.pmf().mass().begin(), source.pmf().mass().end());
    return doc;
}

prob::JointSource source_from_json(const json& doc) {
    try {
        auto sizes = doc.at("alphabets").get<std::vector<std::size_t>>();
        auto mass = doc.at("pmf").get<std::vector<double>>();
        prob::JointSource::Labels labels;
        if (doc.contains("labels")) {
            const auto& l = doc.at("labels");
            if (!l.is_array() || l.size() != 3) throw std::invalid_argument("labels must list three alphabets");
            for (std::size_t i = 0; i < 3; ++i) labels[i] = l[i].get<std::vector<std::string>>();
        }
        return prob::JointSource(prob::FinitePmf(std::move(sizes), std::move(mass)), std::move(labels));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed source document: ") + e.what());
    }
}

json to_json(const prob::DistortionMetric& metric) {
    json doc;
    doc["rows"] = metric.rows();
    doc["cols"] = metric.cols();
    doc["entries"] = json::array();
    for (const auto& e : metric.entries()) {
        if (e)
            doc["entries"].push_back(*e);
        else
            doc["entries"].push_back("inf");
    }
    doc["d_max"] = metric.d_max();
    return doc;
}

prob::DistortionMetric metric_from_json(const json& doc) {
    try {
        const auto rows = doc.at("rows").get<std::size_t>();
        const auto cols = doc.at("cols").get<std::size_t>();
        std::vector<std::optional<double>> entries;
        for (const auto& v : doc.at("entries")) {
            if (v.is_string()) {
                if (v.get<std::string>() != "inf") throw std::invalid_argument("metric entries: only \"inf\" strings allowed");
                entries.emplace_back(std::nullopt);
            } else {
                entries.emplace_back(v.get<double>());
            }
        }
        std::optional<double> d_max;
        if (doc.contains("d_max")) d_max = doc.at("d_max").get<double>();
        return prob::DistortionMetric(rows, cols, std::move(entries), d_max);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed metric document: ") + e.what());
    }
}

} // namespace crrd::io
