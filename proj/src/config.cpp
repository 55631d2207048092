#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <type_traits>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"
#include "satqkd/scenario.hpp"

namespace satqkd::scenario {

namespace {

struct Unit {
    std::function<double(double)> to_internal;
    std::function<double(double)> to_external;
};

const Unit kIdentity{[](double x) { return x; }, [](double x) { return x; }};
const Unit kDegrees{[](double x) { return deg_to_rad(x); }, [](double x) { return rad_to_deg(x); }};
const Unit kMicroradians{[](double x) { return x / 1e6; }, [](double x) { return x * 1e6; }};
const Unit kKilometers{[](double x) { return x * 1e3; }, [](double x) { return x / 1e3; }};

// Shortest decimal whose conversion back to internal units is bit-exact.
double external_value(double internal, const Unit& unit) {
    const double approx = unit.to_external(internal);
    for (int digits : {15, 16, 17}) {
        char buf[40];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, approx, std::chars_format::general, digits);
        double candidate = approx;
        std::from_chars(buf, end, candidate);
        if (unit.to_internal(candidate) == internal) return candidate;
    }
    return approx;
}

template <class E>
using EnumTable = std::initializer_list<std::pair<const char*, E>>;

const EnumTable<beam::DivergenceMode> kDivergenceModes{
    {"fixed_half_angle", beam::DivergenceMode::fixed_half_angle},
    {"diffraction_limited", beam::DivergenceMode::diffraction_limited}};
const EnumTable<atmosphere::DopInterpolation> kDopInterpolations{
    {"linear_in_secant", atmosphere::DopInterpolation::linear_in_secant},
    {"table", atmosphere::DopInterpolation::table}};
const EnumTable<atmosphere::AirmassModel> kAirmassModels{
    {"secant", atmosphere::AirmassModel::secant}, {"kasten_young", atmosphere::AirmassModel::kasten_young}};
const EnumTable<bb84::DetectionModel> kDetectionModels{
    {"budget", bb84::DetectionModel::budget},
    {"explicit_efficiencies", bb84::DetectionModel::explicit_efficiencies}};
const EnumTable<bb84::KernelMode> kKernelModes{{"literal", bb84::KernelMode::literal},
                                               {"normalized", bb84::KernelMode::normalized}};
const EnumTable<e91::SnrMapping> kSnrMappings{{"linear", e91::SnrMapping::linear},
                                              {"quadratic_noise", e91::SnrMapping::quadratic_noise}};
const EnumTable<ScenarioKind> kScenarios{{"budget", ScenarioKind::budget},
                                         {"bb84", ScenarioKind::bb84},
                                         {"e91", ScenarioKind::e91},
                                         {"sweep", ScenarioKind::sweep}};

template <class E>
std::string names_of(const EnumTable<E>& table) {
    std::string out;
    for (const auto& [name, value] : table) out += (out.empty() ? "" : ", ") + std::string(name);
    return out;
}

class Reader {
public:
    Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void number(const char* key, double& out, const Unit& unit = kIdentity) {
        if (const Json* v = take(key)) out = unit.to_internal(as_number(*v, key));
    }

    void optional_number(const char* key, std::optional<double>& out, const Unit& unit = kIdentity) {
        if (const Json* v = take(key)) {
            if (v->is_null()) out.reset();
            else out = unit.to_internal(as_number(*v, key));
        }
    }

    template <class Int>
    void integer(const char* key, Int& out) {
        const Json* v = take(key);
        if (!v) return;
        if (v->is_number_unsigned()) {
            out = static_cast<Int>(v->get<std::uint64_t>());
            return;
        }
        const double d = as_number(*v, key);
        if (d < 0.0 || d != std::floor(d) || d > 9007199254740992.0)
            throw ConfigError(field(key), "expected a non-negative integer");
        out = static_cast<Int>(d);
    }

    void boolean(const char* key, bool& out) {
        if (const Json* v = take(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void text(const char* key, std::string& out) {
        if (const Json* v = take(key)) {
            if (!v->is_string()) throw ConfigError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    template <class E>
    void enumeration(const char* key, E& out, const EnumTable<E>& table) {
        const Json* v = take(key);
        if (!v) return;
        if (v->is_string()) {
            const auto s = v->get<std::string>();
            for (const auto& [name, value] : table)
                if (s == name) {
                    out = value;
                    return;
                }
        }
        throw ConfigError(field(key), "expected one of: " + names_of(table));
    }

    void number_list(const char* key, std::vector<double>& out, const Unit& unit = kIdentity) {
        const Json* v = take(key);
        if (!v) return;
        if (!v->is_array()) throw ConfigError(field(key), "expected an array of numbers");
        out.clear();
        for (const auto& item : *v) out.push_back(unit.to_internal(as_number(item, key)));
    }

    void pair_list(const char* key, std::vector<std::pair<double, double>>& out) {
        const Json* v = take(key);
        if (!v) return;
        if (!v->is_array()) throw ConfigError(field(key), "expected an array of [x, y] pairs");
        out.clear();
        for (const auto& item : *v) {
            if (!item.is_array() || item.size() != 2)
                throw ConfigError(field(key), "expected an array of [x, y] pairs");
            out.emplace_back(as_number(item[0], key), as_number(item[1], key));
        }
    }

    void section(const char* key, const std::function<void(Reader&)>& body) {
        if (const Json* v = take(key)) {
            Reader sub(*v, field(key));
            body(sub);
            sub.finish();
        }
    }

    void finish() const {
        std::string unknown;
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key)) unknown += (unknown.empty() ? "" : ", ") + field(key.c_str());
        if (!unknown.empty()) throw ConfigError(path_, "unknown key(s): " + unknown);
    }

private:
    std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json* take(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    double as_number(const Json& v, const char* key) const {
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        return v.get<double>();
    }

    const Json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

class Writer {
public:
    explicit Writer(Json& out) : out_(out) { out_ = Json::object(); }

    void number(const char* key, const double& v, const Unit& unit = kIdentity) {
        out_[key] = external_value(v, unit);
    }

    void optional_number(const char* key, const std::optional<double>& v, const Unit& unit = kIdentity) {
        out_[key] = v ? Json(external_value(*v, unit)) : Json(nullptr);
    }

    template <class Int>
    void integer(const char* key, const Int& v) {
        out_[key] = static_cast<std::uint64_t>(v);
    }

    void boolean(const char* key, const bool& v) { out_[key] = v; }
    void text(const char* key, const std::string& v) { out_[key] = v; }

    template <class E>
    void enumeration(const char* key, const E& v, const EnumTable<E>& table) {
        for (const auto& [name, value] : table)
            if (value == v) out_[key] = name;
    }

    void number_list(const char* key, const std::vector<double>& v, const Unit& unit = kIdentity) {
        Json arr = Json::array();
        for (double x : v) arr.push_back(external_value(x, unit));
        out_[key] = std::move(arr);
    }

    void pair_list(const char* key, const std::vector<std::pair<double, double>>& v) {
        Json arr = Json::array();
        for (const auto& [x, y] : v) arr.push_back(Json::array({x, y}));
        out_[key] = std::move(arr);
    }

    void section(const char* key, const std::function<void(Writer&)>& body) {
        Json sub;
        Writer w(sub);
        body(w);
        out_[key] = std::move(sub);
    }

private:
    Json& out_;
};

// Field list shared by the reader and the writer; C is const for the writer.
template <class V, class C>
void visit(V& v, C& c) {
    std::string output_dir = c.output_dir.string();
    v.enumeration("scenario", c.scenario, kScenarios);
    v.integer("seed", c.seed);
    v.text("output_dir", output_dir);
    if constexpr (!std::is_const_v<C>) c.output_dir = output_dir;

    v.section("orbit", [&](V& s) {
        auto& o = c.link.orbit;
        s.number("altitude_m", o.altitude_m);
        s.number("earth_radius_m", o.earth_radius_m);
        s.number("gravitational_parameter", o.gravitational_parameter);
        s.number("min_elevation_deg", o.min_elevation_rad, kDegrees);
        s.number("max_pass_elevation_deg", o.max_pass_elevation_rad, kDegrees);
        s.number("time_step_s", o.time_step_s);
        s.number("inclination_deg", o.inclination_deg);
        s.number("raan_deg", o.raan_deg);
        s.number("eccentricity", o.eccentricity);
        s.number("drag_coefficient", o.drag_coefficient);
        s.number("reflectivity_coefficient", o.reflectivity_coefficient);
    });
    v.section("transmitter", [&](V& s) {
        auto& t = c.link.transmitter;
        s.number("aperture_diameter_m", t.aperture_diameter_m);
        s.number("wavelength_m", t.wavelength_m);
        s.number("pulse_rate_hz", t.pulse_rate_hz);
        s.number("mean_photon_number", t.mean_photon_number);
        s.number("optical_efficiency", t.optical_efficiency);
        s.enumeration("divergence_mode", t.divergence_mode, kDivergenceModes);
        s.number("divergence_half_angle_urad", t.divergence_half_angle_rad, kMicroradians);
    });
    v.section("receiver", [&](V& s) {
        auto& r = c.link.receiver;
        s.number("aperture_diameter_m", r.aperture_diameter_m);
        s.number("field_of_view_rad", r.field_of_view_rad);
        s.number("quantum_efficiency", r.quantum_efficiency);
        s.number("dark_count_probability", r.dark_count_probability);
        s.number("basis_misalignment", r.basis_misalignment);
    });
    v.section("atmosphere", [&](V& s) {
        auto& a = c.link.atmosphere;
        s.number("tau_zenith", a.tau_zenith);
        s.number("dop_zenith", a.dop_zenith);
        s.number("dop_horizon", a.dop_horizon);
        s.enumeration("dop_interpolation", a.dop_interpolation, kDopInterpolations);
        s.pair_list("dop_table", a.dop_table);
        s.number("secant_cap_deg", a.secant_cap_rad, kDegrees);
        s.number("depolarization_exponent", a.depolarization_exponent);
    });
    v.section("background", [&](V& s) {
        auto& b = c.link.background;
        s.number("natural_brightness", b.natural_brightness);
        s.number("artificial_brightness", b.artificial_brightness);
        s.optional_number("radiance_conversion", b.radiance_conversion);
        s.number("zenith_counts_target", b.zenith_counts_target);
        s.number("gating_factor", b.gating_factor);
        s.enumeration("airmass_model", b.airmass_model, kAirmassModels);
        s.number("airmass_cap_deg", b.airmass_cap_rad, kDegrees);
        s.number("wavelength_m", b.wavelength_m);
        s.number("reference_zenith_deg", b.reference_zenith_rad, kDegrees);
        s.number("reference_counts", b.reference_counts);
        s.number("elevation_floor_deg", b.elevation_floor_rad, kDegrees);
        s.number("snr_exponent", b.snr_exponent);
    });
    v.section("turbulence", [&](V& s) {
        auto& t = c.link.turbulence;
        s.number("hv_a", t.hv_a);
        s.number("hv_wind_mps", t.hv_wind_mps);
        s.number("ground_height_m", t.ground_height_m);
        s.number("atmosphere_top_m", t.atmosphere_top_m);
        s.number("wavelength_m", t.wavelength_m);
        s.number("pointing_error_urad", t.pointing_error_rad, kMicroradians);
        s.number("beam_waist_at_atmosphere_m", t.beam_waist_at_atmosphere_m);
        s.number("secant_cap_deg", t.secant_cap_rad, kDegrees);
        s.number("scintillation_max_percentile", t.scintillation_max_percentile);
        s.optional_number("scale_factor_zenith", t.scale_factor_zenith);
        s.optional_number("scale_factor_horizon", t.scale_factor_horizon);
        s.number("spreading_loss_zenith_db", t.spreading_loss_zenith_db);
        s.number("spreading_loss_horizon_db", t.spreading_loss_horizon_db);
        s.optional_number("pointing_beam_divergence_urad", t.pointing_beam_divergence_rad, kMicroradians);
        s.number("offpointing_zenith_loss_db", t.offpointing_zenith_loss_db);
    });
    v.section("budget", [&](V& s) {
        auto& b = c.link.budget;
        s.number("basis_rotation_shift_db", b.basis_rotation_shift_db);
        s.number("wavefront_aberration_db", b.wavefront_aberration_db);
        s.number("zenith_signal_fraction", b.zenith_signal_fraction);
        s.optional_number("signal_count_scale_cps", b.signal_count_scale_cps);
    });
    v.section("bb84", [&](V& s) {
        auto& b = c.bb84;
        s.enumeration("detection_model", b.detection_model, kDetectionModels);
        s.enumeration("kernel", b.kernel, kKernelModes);
        s.number("noise_sigma", b.noise_sigma);
        s.integer("n_trials", b.n_trials);
        s.number("interval_s", b.interval_s);
        s.number("scintillation_percentile", b.scintillation_percentile);
        s.number("qber_threshold", b.qber_threshold);
    });
    v.section("e91", [&](V& s) {
        auto& e = c.e91;
        s.integer("n_pairs_per_step", e.n_pairs_per_step);
        s.section("angles_deg", [&](V& a) {
            a.number("a1", e.angles.a1, kDegrees);
            a.number("a3", e.angles.a3, kDegrees);
            a.number("b1", e.angles.b1, kDegrees);
            a.number("b3", e.angles.b3, kDegrees);
        });
        s.enumeration("snr_mapping", e.snr_mapping, kSnrMappings);
        s.boolean("apply_dop", e.apply_dop);
        s.boolean("apply_snr", e.apply_snr);
        s.number("validity_sigma", e.validity_sigma);
    });
    v.section("sweep", [&](V& s) { s.number_list("altitudes_km", c.sweep_altitudes_m, kKilometers); });
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    for (const auto& [name, value] : kScenarios)
        if (value == kind) return name;
    return "unknown";
}

ScenarioKind parse_scenario(std::string_view name) {
    for (const auto& [n, value] : kScenarios)
        if (name == n) return value;
    throw ConfigError("scenario", "expected one of: " + names_of(kScenarios));
}

void ScenarioConfig::validate() const {
    link.orbit.validate();
    link.transmitter.validate();
    link.receiver.validate();
    link.atmosphere.validate();
    link.background.validate();
    link.turbulence.validate();
    link.budget.validate();
    bb84.validate();
    e91.validate();
    if (sweep_altitudes_m.empty()) throw ConfigError("sweep.altitudes_km", "must not be empty");
    for (double h : sweep_altitudes_m)
        if (!(h > 0.0)) throw ConfigError("sweep.altitudes_km", "altitudes must be > 0");
    if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
    ScenarioConfig config;
    if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); })) return config;

    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::string what = e.what();
        if (auto pos = what.find("column"); pos != std::string::npos)
            if (auto colon = what.find(": ", pos); colon != std::string::npos) what = what.substr(colon + 2);
        throw ConfigError("", std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                  ": " + what);
    }
    Reader reader(doc, "");
    visit(reader, config);
    reader.finish();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("", "config file not found: " + path.string());
    return parse_config(io::read_file(path), path.string());
}

Json to_json(const ScenarioConfig& config) {
    Json out;
    Writer writer(out);
    visit(writer, config);
    return out;
}

}  // namespace satqkd::scenario
