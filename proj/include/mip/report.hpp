#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json single header

#include "mip/errors.hpp"
#include "mip/subset.hpp"

namespace mip {

/** Machine-readable result of one search run (JSON, schema 1).  Element
 *  indices in `blocks` are 1-based to match the CLI's reporting. */
struct RunReport {
    int schema = 1;
    std::string tool = "mip";
    std::string version;
    std::string algorithm;  // "queyranne" | "kpartition" | "exhaustive" | ...
    nlohmann::json input;   // provenance: path or generator parameters
    std::uint64_t seed = 0;
    int n = 0;
    std::vector<std::vector<int>> blocks;  // 1-based member lists, ascending
    std::vector<std::string> labels;       // optional, n entries when present
    double loss_bits = 0.0;
    std::uint64_t oracle_calls = 0;
    double wall_time_seconds = 0.0;
    double jitter = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json j{
            {"schema", schema},
            {"tool", tool},
            {"version", version},
            {"algorithm", algorithm},
            {"input", input},
            {"seed", seed},
            {"n", n},
            {"blocks", blocks},
            {"loss_bits", loss_bits},
            {"oracle_calls", oracle_calls},
            {"wall_time_seconds", wall_time_seconds},
            {"jitter", jitter},
        };
        if (!labels.empty()) j["labels"] = labels;
        return j;
    }

    static RunReport from_json(const nlohmann::json& j) {
        RunReport r;
        r.schema = j.at("schema").get<int>();
        if (r.schema != 1) throw invalid_input("unsupported report schema");
        r.tool = j.at("tool").get<std::string>();
        r.version = j.at("version").get<std::string>();
        r.algorithm = j.at("algorithm").get<std::string>();
        r.input = j.at("input");
        r.seed = j.at("seed").get<std::uint64_t>();
        r.n = j.at("n").get<int>();
        r.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
        if (j.contains("labels")) r.labels = j.at("labels").get<std::vector<std::string>>();
        r.loss_bits = j.at("loss_bits").get<double>();
        r.oracle_calls = j.at("oracle_calls").get<std::uint64_t>();
        r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        r.jitter = j.at("jitter").get<double>();
        return r;
    }
};

/** 1-based ascending member list of a subset, for reports. */
inline std::vector<int> one_based(const Subset& s) {
    std::vector<int> out;
    s.for_each([&](int i) { out.push_back(i + 1); });
    return out;
}

}  // namespace mip
