#include "mrc/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mrc {

namespace {

using nlohmann::json;

// 25 * sqrt(2) V source, coupling [2.3, 1.1, 0.9] uH at 2.2e6 rad/s.
constexpr std::string_view kPaperFig2 = R"({
  "omega": 2.2e6,
  "transmitter": {"v_tx_mag": 35.35533905932738, "v_tx_phase": 0.0, "r_tx": 0.35, "l_tx": 6.35e-6},
  "receivers": [
    {"r": 0.15, "l": 0.85e-6, "h": 2.3e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 250.0, "x_nominal": 7.5},
    {"r": 0.15, "l": 0.85e-6, "h": 1.1e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 50.0, "x_nominal": 7.5},
    {"r": 0.15, "l": 0.85e-6, "h": 0.9e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 50.0, "x_nominal": 7.5}
  ]
})";

constexpr std::string_view kPaperFig3 = R"({
  "omega": 2.2e6,
  "transmitter": {"v_tx_mag": 35.35533905932738, "v_tx_phase": 0.0, "r_tx": 0.35, "l_tx": 6.35e-6},
  "receivers": [
    {"r": 0.15, "l": 0.85e-6, "h": 2.3e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 250.0},
    {"r": 0.15, "l": 0.85e-6, "h": 1.1e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 50.0},
    {"r": 0.15, "l": 0.85e-6, "h": 0.9e-6, "x_min": 0.01, "x_max": 100.0, "p_min": 50.0}
  ]
})";

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    const json& object(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_object()) fail(join(path, key), "expected an object");
        return value;
    }

    const json& array(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_array()) fail(join(path, key), "expected an array");
        return value;
    }

    double number(const json& parent, const std::string& key, const std::string& path) const {
        const json& value = member(parent, key, path);
        if (!value.is_number()) fail(join(path, key), "expected a number");
        return value.get<double>();
    }

    std::optional<double> optional_number(const json& parent, const std::string& key, const std::string& path) const {
        if (!parent.contains(key)) return std::nullopt;
        return number(parent, key, path);
    }

    [[noreturn]] void fail(const std::string& field, const std::string& message) const {
        throw ScenarioError(source_, field, message);
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    const json& member(const json& parent, const std::string& key, const std::string& path) const {
        auto it = parent.find(key);
        if (it == parent.end()) fail(join(path, key), "missing field");
        return *it;
    }

    std::string source_;
};

SystemScenario from_json(const json& doc, const std::string& source) {
    const Reader in(source);
    if (!doc.is_object()) in.fail("$", "expected a JSON object at top level");

    const double omega = in.number(doc, "omega", "");
    const json& tx_json = in.object(doc, "transmitter", "");
    TransmitterSpec tx;
    tx.v_mag = in.number(tx_json, "v_tx_mag", "transmitter");
    tx.v_phase = in.optional_number(tx_json, "v_tx_phase", "transmitter").value_or(0.0);
    tx.r = in.number(tx_json, "r_tx", "transmitter");
    tx.l = in.number(tx_json, "l_tx", "transmitter");

    const json& rx_json = in.array(doc, "receivers", "");
    std::vector<ReceiverSpec> receivers;
    for (std::size_t n = 0; n < rx_json.size(); ++n) {
        const std::string path = "receivers[" + std::to_string(n) + "]";
        const json& item = rx_json[n];
        if (!item.is_object()) in.fail(path, "expected an object");
        ReceiverSpec rx;
        rx.r = in.number(item, "r", path);
        rx.l = in.number(item, "l", path);
        rx.h = in.number(item, "h", path);
        rx.x_min = in.number(item, "x_min", path);
        rx.x_max = in.number(item, "x_max", path);
        rx.p_min = in.number(item, "p_min", path);
        rx.x_nominal = in.optional_number(item, "x_nominal", path);
        if (!(rx.h > 0.0)) in.fail(path + ".h", "must be > 0");
        receivers.push_back(rx);
    }

    try {
        return SystemScenario(omega, tx, std::move(receivers));
    } catch (const InvalidScenario& e) {
        const std::string what = e.what();
        const auto colon = what.find(':');
        if (colon == std::string::npos) in.fail("$", what);
        in.fail(what.substr(0, colon), what.substr(colon + 2));
    }
}

SystemScenario parse_text(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError(source, "$", std::string("malformed JSON: ") + e.what());
    }
    return from_json(doc, source);
}

}  // namespace

ScenarioError::ScenarioError(std::string source, std::string field, const std::string& message)
    : std::runtime_error(source + ": " + field + ": " + message), source_(std::move(source)), field_(std::move(field)) {}

SystemScenario parse_scenario(std::string_view text, std::string_view source) {
    return parse_text(text, std::string(source));
}

std::string serialize_scenario(const SystemScenario& scenario) {
    const auto& t = scenario.transmitter();
    json doc;
    doc["omega"] = scenario.omega();
    doc["transmitter"] = {{"v_tx_mag", t.v_mag}, {"v_tx_phase", t.v_phase}, {"r_tx", t.r}, {"l_tx", t.l}};
    json receivers = json::array();
    for (const auto& rx : scenario.receivers()) {
        json item = {{"r", rx.r}, {"l", rx.l}, {"h", rx.h}, {"x_min", rx.x_min}, {"x_max", rx.x_max}, {"p_min", rx.p_min}};
        if (rx.x_nominal) item["x_nominal"] = *rx.x_nominal;
        receivers.push_back(std::move(item));
    }
    doc["receivers"] = std::move(receivers);
    return doc.dump(2) + "\n";
}

SystemScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        const std::string name = path.string();
        for (const auto& bundled : bundled_scenario_names()) {
            if (name == bundled) return bundled_scenario(name);
        }
        throw ScenarioError(name, "$", "cannot open file");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_text(buffer.str(), path.string());
}

SystemScenario bundled_scenario(std::string_view name) {
    if (name == "paper-fig2") return parse_text(kPaperFig2, "paper-fig2");
    if (name == "paper-fig3") return parse_text(kPaperFig3, "paper-fig3");
    throw ScenarioError(std::string(name), "$", "unknown bundled scenario");
}

std::vector<std::string> bundled_scenario_names() { return {"paper-fig2", "paper-fig3"}; }

}  // namespace mrc
