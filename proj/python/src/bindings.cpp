#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "satqkd/bb84.hpp"
#include "satqkd/e91.hpp"
#include "satqkd/error.hpp"
#include "satqkd/scenario.hpp"

namespace py = pybind11;
using namespace satqkd;

namespace {

scenario::ScenarioConfig config_from(const std::string& json_text) {
    auto cfg = scenario::parse_config(json_text, "<python>");
    cfg.validate();
    return cfg;
}

py::dict budget_dict(const link::LossBudget& b) {
    py::dict channels;
    for (const auto& [name, db] : b.entries) channels[py::str(name)] = db;
    py::dict out;
    out["elevation_deg"] = rad_to_deg(b.elevation_rad);
    out["channels"] = channels;
    out["total_db"] = b.total_db;
    return out;
}

}  // namespace

PYBIND11_MODULE(_satqkd, m) {
    m.doc() = "LEO satellite QKD downlink simulator";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ChannelError>(m, "ChannelError", PyExc_RuntimeError);

    m.def("slant_range", [](double elevation_deg, double altitude_m) {
        orbit::OrbitConfig cfg;
        cfg.altitude_m = altitude_m;
        return orbit::slant_range(deg_to_rad(elevation_deg), cfg);
    }, py::arg("elevation_deg"), py::arg("altitude_m") = 750e3);

    m.def("pass_duration_above", [](double threshold_deg, const std::string& config) {
        return orbit::pass_duration_above(config_from(config).link.orbit, deg_to_rad(threshold_deg));
    }, py::arg("threshold_deg"), py::arg("config") = "");

    m.def("geometric_loss_db", [](double distance_m, const std::string& config) {
        const auto cfg = config_from(config);
        return beam::geometric_loss_db(distance_m, cfg.link.transmitter, cfg.link.receiver);
    }, py::arg("distance_m"), py::arg("config") = "");

    m.def("budget", [](double elevation_deg, double percentile, const std::string& config) {
        const link::LinkModel model{config_from(config).link};
        return budget_dict(model.budget(deg_to_rad(elevation_deg), percentile));
    }, py::arg("elevation_deg") = 90.0, py::arg("percentile") = 0.0, py::arg("config") = "");

    m.def("qber", [](double detection_probability) {
        return bb84::qber(detection_probability, beam::ReceiverConfig{});
    }, py::arg("detection_probability"));

    m.def("chsh", [](std::size_t n_pairs, double gamma_dop, double gamma_snr, std::uint64_t seed) {
        Rng rng = make_stream(seed, 0);
        const auto r = e91::chsh(e91::prepare_singlet(), e91::ChshAngles{}, n_pairs, {gamma_dop, gamma_snr}, rng);
        return py::make_tuple(r.s, r.std_error);
    }, py::arg("n_pairs"), py::arg("gamma_dop") = 1.0, py::arg("gamma_snr") = 1.0, py::arg("seed") = 1);

    m.def("run", [](const std::string& config) {
        const auto report = scenario::run(config_from(config));
        return py::make_tuple(report.files, report.summary);
    }, py::arg("config"), "Runs a scenario from JSON text; returns (files, summary).");
}
