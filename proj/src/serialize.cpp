#include "aoisched/serialize.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace aoisched {

Json to_json(const Params& params) {
    Json j;
    j["p"] = params.p;
    j["d"] = params.d;
    j["delta_m"] = params.delta_m;
    return j;
}

Params params_from_json(const Json& j) {
    return Params(j.at("p").get<double>(), j.at("d").get<int>(), j.at("delta_m").get<int>());
}

Json to_json(const TabularPolicy& policy) {
    Json j = to_json(policy.params);
    j["avg_cost"] = std::isfinite(policy.avg_cost) ? Json(policy.avg_cost) : Json(nullptr);
    Json sw = Json::array();
    for (int idx = 0; idx < policy.params.n_states(); ++idx) {
        if (policy.action_of[idx] == Action::Switch) {
            State s = policy.params.state_at(idx);
            sw.push_back(Json::array({s.delta, s.l}));
        }
    }
    j["switch_states"] = std::move(sw);
    return j;
}

TabularPolicy tabular_from_json(const Json& j) {
    TabularPolicy policy;
    policy.params = params_from_json(j);
    policy.action_of.assign(policy.params.n_states(), Action::Skip);
    if (j.contains("avg_cost") && !j.at("avg_cost").is_null())
        policy.avg_cost = j.at("avg_cost").get<double>();
    for (const auto& e : j.at("switch_states")) {
        State s{e.at(0).get<int>(), e.at(1).get<int>(), 1};
        if (s.delta < policy.params.d || s.delta > policy.params.delta_m || s.l < 0 ||
            s.l >= policy.params.d)
            throw std::invalid_argument("tabular policy file: switch state out of range");
        policy.action_of[policy.params.state_index(s)] = Action::Switch;
    }
    return policy;
}

Json to_json(const ThresholdPolicy& tp) {
    Json j = to_json(tp.params);
    j["K"] = tp.K;
    j["tau"] = tp.tau;
    return j;
}

ThresholdPolicy threshold_from_json(const Json& j) {
    ThresholdPolicy tp;
    tp.params = params_from_json(j);
    tp.K = j.at("K").get<int>();
    tp.tau = j.at("tau").get<std::vector<int>>();
    tp.validate();
    return tp;
}

Json to_json(const EpochStats& st) {
    Json j;
    j["mean_x"] = st.mean_x;
    j["mean_x2"] = st.mean_x2;
    j["avg_aoi"] = st.avg_aoi;
    return j;
}

Json to_json(const SimReport& rep) {
    Json j;
    j["avg_aoi"] = rep.avg_aoi;
    j["n_epochs"] = rep.n_epochs;
    j["emp_mean_x"] = rep.emp_mean_x;
    j["emp_mean_x2"] = rep.emp_mean_x2;
    j["censored"] = rep.censored;
    j["emp_mean_r"] = rep.emp_mean_r;
    j["emp_mean_rx"] = rep.emp_mean_rx;
    j["emp_mean_r2"] = rep.emp_mean_r2;
    j["stderr_avg_aoi"] = rep.stderr_avg_aoi();
    j["rng"] = "splitmix64";
    return j;
}

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string hash_file(const std::string& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + buf;
}

Json load_json_file(const std::string& path) {
    return Json::parse(read_file(path));
}

void save_json_file(const std::string& path, const Json& j) {
    write_file(path, j.dump(2) + "\n");
}

}  // namespace aoisched
