#include "satqkd/scenario.hpp"

#include <cstdio>
#include <sstream>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"
#include "satqkd/orbit_pass.hpp"
#include "satqkd/parallel.hpp"

namespace satqkd::scenario {

namespace fs = std::filesystem;

namespace {

constexpr double kReferenceTotalLow = 34.008;
constexpr double kReferenceTotalHigh = 37.099;

Json rounded(double v) { return io::round_sig6(v); }

Json pair_json(double a, double b) { return Json::array({rounded(a), rounded(b)}); }

const char* name_of(bb84::DetectionModel m) {
    return m == bb84::DetectionModel::budget ? "budget" : "explicit_efficiencies";
}

const char* name_of(bb84::KernelMode m) { return m == bb84::KernelMode::literal ? "literal" : "normalized"; }

const char* name_of(beam::DivergenceMode m) {
    return m == beam::DivergenceMode::fixed_half_angle ? "fixed_half_angle" : "diffraction_limited";
}

struct ZenithBudgets {
    link::LossBudget low;
    link::LossBudget high;
};

ZenithBudgets zenith_budgets(const link::LinkModel& model, const bb84::Bb84Config& bb84) {
    return {model.budget(kPi / 2, bb84.scintillation_percentile),
            model.budget(kPi / 2, model.config().turbulence.scintillation_max_percentile)};
}

std::string altitude_label(double altitude_m) {
    return io::format_number(altitude_m / 1e3) + "km";
}

}  // namespace

Json budget_to_json(const link::LossBudget& low, const link::LossBudget& high, const link::LinkModel& model,
                    const bb84::Bb84Config& bb84) {
    const auto& c = model.config();
    const auto& cal = model.calibration();

    Json doc;
    doc["elevation_deg"] = rounded(rad_to_deg(low.elevation_rad));
    doc["altitude_km"] = rounded(c.orbit.altitude_m / 1e3);
    Json channels = Json::object();
    for (const auto& [name, value] : low.entries) channels[name] = rounded(value);
    doc["channels"] = std::move(channels);
    doc["total_db"] = rounded(low.total_db);
    doc["scintillation_percentiles"] =
        pair_json(bb84.scintillation_percentile, c.turbulence.scintillation_max_percentile);
    doc["scintillation_db_range"] = pair_json(low.at("scintillation"), high.at("scintillation"));
    doc["total_db_range"] = pair_json(low.total_db, high.total_db);

    Json meta;
    meta["divergence_mode"] = name_of(c.transmitter.divergence_mode);
    meta["beam_width_m"] = rounded(beam::beam_width(orbit::slant_range(low.elevation_rad, c.orbit), c.transmitter));
    meta["detection_model"] = name_of(bb84.detection_model);
    meta["detection_probability"] = bb84.detection_model == bb84::DetectionModel::budget
                                        ? "t = 10^(-total_db/10)"
                                        : "t = quantum_efficiency * optical_efficiency * mean_photon_number * 10^(-total_db/10)";
    meta["kernel"] = name_of(bb84.kernel);
    meta["kernel_expectation"] = rounded(bb84::kernel_expectation(bb84.noise_sigma, bb84.kernel));
    meta["loss_rules"] = {
        {"depolarization", "-" + io::format_number(10 * c.atmosphere.depolarization_exponent) + " log10(DoP)"},
        {"background_snr", "-" + io::format_number(10 * c.background.snr_exponent) + " log10(S_F)"},
        {"scintillation", "percentile of -10 log10(I/<I>), clamped at 0"},
        {"beam_wandering", "off-pointing loss with beam wander as the only deflection"},
    };
    meta["calibration"] = {
        {"radiance_conversion", rounded(cal.radiance_conversion)},
        {"background_exponent", rounded(cal.background_exponent)},
        {"zenith_signal_cps", rounded(cal.zenith_signal_cps)},
        {"signal_count_scale_cps", rounded(cal.signal_count_scale_cps)},
        {"scale_factor_zenith", rounded(cal.scale_factor_zenith)},
        {"scale_factor_horizon", rounded(cal.scale_factor_horizon)},
        {"pointing_beam_divergence_urad", rounded(cal.pointing_beam_divergence_rad * 1e6)},
    };
    doc["metadata"] = std::move(meta);
    return doc;
}

Json budget_entries_to_json(const link::LossBudget& budget) {
    Json doc;
    doc["elevation_rad"] = budget.elevation_rad;
    Json entries = Json::array();
    for (const auto& [name, value] : budget.entries) entries.push_back(Json::array({name, value}));
    doc["entries"] = std::move(entries);
    doc["total_db"] = budget.total_db;
    return doc;
}

link::LossBudget budget_from_json(const Json& doc) {
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& e : doc.at("entries")) entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
    auto budget = link::make_budget(doc.at("elevation_rad").get<double>(), std::move(entries));
    if (budget.total_db != doc.at("total_db").get<double>())
        throw ConfigError("total_db", "does not equal the sum of the entries");
    return budget;
}

std::string format_budget_table(const link::LossBudget& low, const link::LossBudget& high) {
    auto fixed = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    auto cell = [&](double a, double b) { return a == b ? fixed(a) : "[" + fixed(a) + ", " + fixed(b) + "]"; };

    std::ostringstream out;
    out << "Loss budget at elevation " << io::format_number(rad_to_deg(low.elevation_rad)) << " deg\n";
    char line[128];
    std::snprintf(line, sizeof line, "  %-24s %s\n", "channel", "loss [dB]");
    out << line;
    for (std::size_t i = 0; i < low.entries.size(); ++i) {
        const auto& [name, value] = low.entries[i];
        std::snprintf(line, sizeof line, "  %-24s %s\n", name.c_str(), cell(value, high.entries.at(i).second).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "  %-24s %s\n", "total", cell(low.total_db, high.total_db).c_str());
    out << line;
    return out.str();
}

RunReport run(const ScenarioConfig& config) {
    config.validate();
    const fs::path dir = config.output_dir;
    fs::create_directories(dir);

    RunReport report;
    auto emit = [&](const std::string& name, const std::string& content) {
        io::write_file_atomic(dir / name, content);
        report.files.push_back(dir / name);
    };
    auto dump = [](const Json& j) { return j.dump(2) + "\n"; };

    emit("config_echo.json", dump(to_json(config)));

    const link::LinkModel model(config.link);
    const auto zenith = zenith_budgets(model, config.bb84);
    std::ostringstream summary;
    summary << format_budget_table(zenith.low, zenith.high);

    switch (config.scenario) {
    case ScenarioKind::budget: {
        Json doc = budget_to_json(zenith.low, zenith.high, model, config.bb84);
        doc["reference_total_db_range"] = pair_json(kReferenceTotalLow, kReferenceTotalHigh);
        doc["residual_db"] = pair_json(zenith.low.total_db - kReferenceTotalLow, zenith.high.total_db - kReferenceTotalHigh);
        emit("budget.json", dump(doc));
        summary << "  residual vs reference total: " << io::format_number(zenith.low.total_db - kReferenceTotalLow)
                << " / " << io::format_number(zenith.high.total_db - kReferenceTotalHigh) << " dB\n";
        break;
    }
    case ScenarioKind::bb84: {
        const auto pass = orbit::generate_pass(config.link.orbit);
        emit("pass.csv", orbit::pass_to_csv(pass));
        const auto result = bb84::simulate_pass(pass, model, config.bb84, config.seed);
        emit("bb84_pass.csv", bb84::to_csv(result));

        const auto& peak = *std::max_element(result.samples.begin(), result.samples.end(),
                                             [](const auto& a, const auto& b) { return a.elevation_rad < b.elevation_rad; });
        double worst_qber = 0.0;
        for (const auto& s : result.samples) worst_qber = std::max(worst_qber, s.qber);
        const double geometric = pass.back().t_s - pass.front().t_s;
        Json doc;
        doc["samples"] = result.samples.size();
        doc["geometric_duration_s"] = rounded(geometric);
        doc["qber_threshold"] = rounded(config.bb84.qber_threshold);
        doc["active_time_s"] = rounded(result.active_time_s);
        doc["peak_elevation_deg"] = rounded(rad_to_deg(peak.elevation_rad));
        doc["peak_qber"] = rounded(peak.qber);
        doc["peak_key_rate_bps"] = rounded(peak.sifted_key_rate_bps);
        doc["max_qber"] = rounded(worst_qber);
        emit("bb84_summary.json", dump(doc));
        summary << "BB84: QBER " << io::format_number(100 * peak.qber) << " %, sifted key rate "
                << io::format_number(peak.sifted_key_rate_bps) << " bit/s at maximum elevation; active time "
                << io::format_number(result.active_time_s) << " s of " << io::format_number(geometric) << " s\n";
        break;
    }
    case ScenarioKind::e91: {
        const auto pass = orbit::generate_pass(config.link.orbit);
        emit("pass.csv", orbit::pass_to_csv(pass));
        const auto result = e91::simulate_chsh_over_pass(pass, model, config.e91, config.seed);
        emit("e91_pass.csv", e91::to_csv(result));
        Json doc;
        doc["n_pairs_per_step"] = config.e91.n_pairs_per_step;
        doc["samples"] = result.samples.size();
        doc["s_min"] = rounded(result.s_min);
        doc["s_max"] = rounded(result.s_max);
        doc["validity_sigma"] = rounded(config.e91.validity_sigma);
        doc["validity_window"] = {
            {"found", result.window.found},
            {"t_start_s", rounded(result.window.t_start_s)},
            {"t_end_s", rounded(result.window.t_end_s)},
        };
        doc["pass_window"] = pair_json(pass.front().t_s, pass.back().t_s);
        emit("e91_summary.json", dump(doc));
        summary << "E91: S in [" << io::format_number(result.s_min) << ", " << io::format_number(result.s_max)
                << "]; Bell test valid ";
        if (result.window.found)
            summary << "from " << io::format_number(result.window.t_start_s) << " s to "
                    << io::format_number(result.window.t_end_s) << " s\n";
        else
            summary << "nowhere on the pass\n";
        break;
    }
    case ScenarioKind::sweep: {
        const auto& alts = config.sweep_altitudes_m;
        // Calibration constants are properties of the hardware and the sky,
        // so they stay at the values solved for the configured orbit.
        const link::LinkConfig pinned = link::pin_calibration(config.link, model.calibration());
        std::vector<Json> docs(alts.size());
        parallel_for(alts.size(), [&](std::size_t i) {
            link::LinkConfig lc = pinned;
            lc.orbit.altitude_m = alts[i];
            const link::LinkModel m(lc);
            const auto z = zenith_budgets(m, config.bb84);
            docs[i] = budget_to_json(z.low, z.high, m, config.bb84);
        });
        for (std::size_t i = 0; i < alts.size(); ++i) {
            emit("budget_" + altitude_label(alts[i]) + ".json", dump(docs[i]));
            summary << "  " << altitude_label(alts[i]) << ": geometric "
                    << io::format_number(docs[i]["channels"]["geometric"].get<double>()) << " dB, total "
                    << io::format_number(docs[i]["total_db"].get<double>()) << " dB\n";
        }
        break;
    }
    }
    report.summary = summary.str();
    return report;
}

Json error_to_json(const std::exception& e) {
    Json err;
    if (auto* c = dynamic_cast<const ConfigError*>(&e)) {
        err["type"] = "config_error";
        err["field"] = c->field();
    } else if (auto* ch = dynamic_cast<const ChannelError*>(&e)) {
        err["type"] = "channel_error";
        err["channel"] = ch->channel();
    } else if (dynamic_cast<const DomainError*>(&e)) {
        err["type"] = "domain_error";
    } else if (dynamic_cast<const NumericError*>(&e)) {
        err["type"] = "numeric_error";
    } else {
        err["type"] = "error";
    }
    err["message"] = e.what();
    return Json{{"error", err}};
}

}  // namespace satqkd::scenario
