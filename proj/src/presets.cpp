#include "nuqwalk/presets.hpp"

#include <map>
#include <stdexcept>

namespace nuqwalk {

namespace {

// Joint position densities at t=25 across the gain-loss grid; the broken-
// phase point defaults to e^gamma = 1.5 (configurable).
const std::string kFig1 = R"json({
  "theta1_pi": 0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.0, 1.3, "ep", 1.5],
  "sym": "both",
  "steps": 25,
  "density_times": [25]
})json";

// Distance-RMS time series on the same parameter grid.
const std::string kFig2 = R"json({
  "theta1_pi": 0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.0, 1.3, "ep", 1.5],
  "sym": "both",
  "steps": 50
})json";

// Entanglement entropy series with the one-particle companion column.
const std::string kFig3 = R"json({
  "theta1_pi": -0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.3, "ep", 1.5],
  "sym": "both",
  "steps": 100
})json";

// Qubit entropy at t=100 across theta2; regions are interval labels in
// radians (I and III unbroken, II the broken window at this gain-loss value).
const std::string kFig4 = R"json({
  "theta1_pi": -0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.3],
  "sym": "both",
  "steps": 100,
  "sweep": {"param": "theta2", "min": -1.45, "max": -0.10, "count": 41, "t": 100},
  "regions": {"I": [-0.45, -0.10], "II": [-1.20, -0.52], "III": [-1.45, -1.25]}
})json";

// Concurrence series for the four bipartitions.
const std::string kFig5 = R"json({
  "theta1_pi": -0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.0, 1.3, "ep", 1.5],
  "sym": "both",
  "steps": 100
})json";

// Default dense-oracle certification grid.
const std::string kCertify = R"json({
  "theta1_pi": 0.25,
  "theta2_pi": -0.14285714285714285,
  "phi_pi": 0.0,
  "gamma_exp": [1.0, 1.3, "ep", 1.5],
  "sym": "both",
  "steps": 5,
  "certify": {"t_max": 5, "tol": 1e-10}
})json";

const std::map<std::string, const std::string*>& table() {
    static const std::map<std::string, const std::string*> t = {
        {"fig1", &kFig1}, {"fig2", &kFig2}, {"fig3", &kFig3},
        {"fig4", &kFig4}, {"fig5", &kFig5}, {"certify", &kCertify},
    };
    return t;
}

} // namespace

const std::string& preset_json(const std::string& name) {
    const auto& t = table();
    const auto it = t.find(name);
    if (it == t.end()) throw std::out_of_range("unknown preset: " + name);
    return *it->second;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : table()) names.push_back(k);
    return names;
}

} // namespace nuqwalk
