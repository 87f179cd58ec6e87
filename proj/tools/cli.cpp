#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "rze/rze.hpp"

namespace rze::cli {
namespace {

// Verbosity only; never consulted by numeric code.
void configure_logging() {
    static const bool once = [] {
        auto logger = spdlog::stderr_logger_mt("rze");
        spdlog::set_default_logger(logger);
        spdlog::set_pattern("[%l] %v");
        spdlog::set_level(spdlog::level::warn);
        if (const char* env = std::getenv("RZE_LOG")) {
            spdlog::set_level(spdlog::level::from_str(env));
        }
        return true;
    }();
    (void)once;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

int fail(std::ostream& err, const std::string& kind, const std::string& message, int status) {
    err << "error kind=" << kind << " message=\"" << escape(message) << "\"\n";
    return status;
}

// Expands `--config file.json` into flags placed before the explicit ones, so
// explicit flags win (options take the last occurrence).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::optional<std::string> config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (rest.empty()) {
        return rest;
    }
    out.push_back(rest.front());
    if (config_path) {
        Json j;
        try {
            j = Json::parse(read_text_file(*config_path));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("config file '" + *config_path + "' is not valid JSON: " + e.what());
        }
        if (!j.is_object()) {
            throw ValidationError("config file must hold a JSON object of option names to values");
        }
        for (const auto& [key, value] : j.items()) {
            if (value.is_boolean()) {
                if (value.get<bool>()) {
                    out.push_back("--" + key);
                }
            } else if (value.is_string()) {
                out.push_back("--" + key);
                out.push_back(value.get<std::string>());
            } else if (value.is_number()) {
                out.push_back("--" + key);
                out.push_back(value.dump());
            } else {
                throw ValidationError("config key '" + key + "' must be a string, number or boolean");
            }
        }
    }
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

struct SampleOptions {
    std::string intensity = "lebesgue:1";
    std::string window;
    std::string marks;
    std::optional<std::uint64_t> seed;
    std::string out = "configuration.json";
};

struct GridOptions {
    std::string input;
    int genus = 2;
    double radius = 0.0;
    std::string grid;
    double confidence = 0.95;
    bool no_certificate = false;
    std::string intensity;
    std::string marks;
    std::string out = "grid.csv";
    std::string sidecar;
    unsigned threads = 1;
};

struct VerifyOptions {
    std::string input;
    int genus = 2;
    double radius = 0.0;
    std::string intensity;
    std::string marks;
    std::string out = "report.json";
    unsigned threads = 1;
};

struct CampbellOptions {
    std::string check = "campbell";
    std::string function = "indicator:1";
    std::string intensity = "lebesgue:1";
    std::string window = "disk:5";
    std::uint64_t trials = 10000;
    std::optional<std::uint64_t> seed;
    std::string out = "stats.json";
    unsigned threads = 1;
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
    if (!seed) {
        throw ValidationError("--seed is required; runs are never seeded from the clock");
    }
    return *seed;
}

int cmd_sample(const SampleOptions& o, std::ostream& out) {
    const std::uint64_t seed = require_seed(o.seed);
    const IntensityMeasure intensity = parse_intensity(o.intensity);
    const Window window = parse_window(o.window);
    ConfigurationFile file{Configuration::empty(window, seed), intensity.description(), std::nullopt};
    if (!o.marks.empty()) {
        const MarkDistribution marks = parse_marks(o.marks);
        file.config = sample_marked(intensity, marks, window, seed);
        file.mark_distribution = marks.description();
    } else {
        file.config = sample_poisson(intensity, window, seed);
    }
    write_text_file(o.out, to_json(file).dump(2) + "\n");
    const std::size_t n = std::visit([](const auto& c) { return c.size(); }, file.config);
    out << "points=" << n << " seed=" << seed << " out=" << o.out << "\n";
    spdlog::info("sampled {} points on {} with {}", n, window.description(), intensity.description());
    return kExitOk;
}

// Intensity and mark mean for a certificate: explicit flags first, then the file's provenance.
std::optional<CertificateRequest> certificate_for(const ConfigurationFile& file, const std::string& intensity_flag,
                                                  const std::string& marks_flag, double confidence) {
    const std::string intensity_desc = !intensity_flag.empty() ? intensity_flag : file.intensity.value_or("");
    if (intensity_desc.empty()) {
        throw ValidationError("a tail certificate needs the sampling intensity (--intensity or an 'intensity' entry in "
                              "the configuration file)");
    }
    double mark_mean = 1.0;
    if (file.is_marked()) {
        const std::string marks_desc = !marks_flag.empty() ? marks_flag : file.mark_distribution.value_or("");
        if (marks_desc.empty()) {
            throw ValidationError("a tail certificate for a marked configuration needs the mark distribution (--marks)");
        }
        mark_mean = parse_marks(marks_desc).mean();
    }
    return CertificateRequest{parse_intensity(intensity_desc), confidence, mark_mean};
}

ProductEvaluator make_evaluator(const ConfigurationFile& file, Genus genus, double radius,
                                std::optional<CertificateRequest> certificate) {
    return std::visit([&](const auto& c) { return ProductEvaluator(c, genus, radius, certificate); }, file.config);
}

EvaluationGrid parse_grid(const std::string& text, double radius) {
    EvaluationGrid g;
    if (text.empty()) {
        const double h = radius / std::sqrt(2.0);
        g.re_min = g.im_min = -h;
        g.re_max = g.im_max = h;
        return g;
    }
    const auto f = detail::split_fields(text);
    if (f.size() != 6) {
        throw ValidationError("grid descriptor is re_min:re_max:im_min:im_max:nx:ny, got '" + text + "'");
    }
    g.re_min = detail::parse_real(f[0], text);
    g.re_max = detail::parse_real(f[1], text);
    g.im_min = detail::parse_real(f[2], text);
    g.im_max = detail::parse_real(f[3], text);
    g.nx = detail::parse_count(f[4], text);
    g.ny = detail::parse_count(f[5], text);
    return g;
}

int cmd_grid(const GridOptions& o, std::ostream& out) {
    const Genus genus{o.genus};
    const ConfigurationFile file = load_configuration(o.input);
    std::optional<CertificateRequest> certificate;
    if (!o.no_certificate) {
        genus.require_convergent("certified grid evaluation (pass --no-certificate to evaluate without one)");
        certificate = certificate_for(file, o.intensity, o.marks, o.confidence);
    }
    const ProductEvaluator ev = make_evaluator(file, genus, o.radius, certificate);
    const EvaluationGrid grid = parse_grid(o.grid, o.radius);
    const GridResult result = grid_evaluate(ev, grid, o.threads);
    write_text_file(o.out, grid_csv(result));

    Json side;
    side["input"] = o.input;
    side["seed"] = file.seed();
    side["genus"] = genus.value();
    side["eval_radius"] = ev.eval_radius();
    side["sample_radius"] = ev.sample_radius();
    side["window"] = to_json(file.window());
    side["intensity"] = certificate ? Json(certificate->intensity.description())
                                    : (file.intensity ? Json(*file.intensity) : Json(nullptr));
    side["mark_distribution"] = file.mark_distribution ? Json(*file.mark_distribution) : Json(nullptr);
    side["certificate"] = certificate.has_value();
    side["tail_bound"] = ev.tail() ? to_json(*ev.tail()) : Json(nullptr);
    Json g;
    g["re_min"] = grid.re_min;
    g["re_max"] = grid.re_max;
    g["im_min"] = grid.im_min;
    g["im_max"] = grid.im_max;
    g["nx"] = grid.nx;
    g["ny"] = grid.ny;
    side["grid"] = std::move(g);
    const std::string sidecar = o.sidecar.empty() ? o.out + ".json" : o.sidecar;
    write_text_file(sidecar, side.dump(2) + "\n");
    out << "nodes=" << result.nodes.size() << " certificate=" << (certificate ? "yes" : "no") << " out=" << o.out
        << " sidecar=" << sidecar << "\n";
    return kExitOk;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    const Genus genus{o.genus};
    const ConfigurationFile file = load_configuration(o.input);
    const std::vector<MarkedPoint> claimed = file.entries();

    // With recorded provenance the product is rebuilt from the seed, and the
    // file's points are only claims about where its zeros are.
    const std::string intensity_desc = !o.intensity.empty() ? o.intensity : file.intensity.value_or("");
    ConfigurationFile source = file;
    if (!intensity_desc.empty()) {
        const IntensityMeasure intensity = parse_intensity(intensity_desc);
        if (file.is_marked()) {
            const std::string marks_desc = !o.marks.empty() ? o.marks : file.mark_distribution.value_or("");
            if (marks_desc.empty()) {
                throw ValidationError("regenerating a marked configuration needs its mark distribution (--marks)");
            }
            source.config = sample_marked(intensity, parse_marks(marks_desc), file.window(), file.seed());
        } else {
            source.config = sample_poisson(intensity, file.window(), file.seed());
        }
        spdlog::info("rebuilt the product from seed {} with {}", file.seed(), intensity_desc);
    }
    const ProductEvaluator ev = make_evaluator(source, genus, o.radius, std::nullopt);
    const ZeroReport report = verify_zero_set(ev, claimed, IsolationPolicy{}, o.threads);
    Json j = to_json(report);
    Json header;
    header["input"] = o.input;
    header["seed"] = file.seed();
    header["genus"] = genus.value();
    header["eval_radius"] = o.radius;
    header["regenerated"] = !intensity_desc.empty();
    header.update(j);
    write_text_file(o.out, header.dump(2) + "\n");
    out << "passed=" << (report.passed ? "true" : "false") << " contours=" << report.points.size()
        << " bulk=" << report.bulk.counted << "/" << report.bulk.expected << " out=" << o.out << "\n";
    return report.passed ? kExitOk : kExitVerificationFailed;
}

int cmd_campbell(const CampbellOptions& o, std::ostream& out) {
    const std::uint64_t seed = require_seed(o.seed);
    const TestFunction f = parse_test_function(o.function);
    const IntensityMeasure intensity = parse_intensity(o.intensity);
    const Window window = parse_window(o.window);
    McStatistics stats;
    if (o.check == "campbell") {
        stats = campbell_mc_check(f, intensity, window, o.trials, seed, o.threads);
    } else if (o.check == "laplace") {
        stats = laplace_mc_check(f, intensity, window, o.trials, seed, o.threads);
    } else {
        throw ValidationError("--check must be 'campbell' or 'laplace'");
    }
    Json j;
    j["function"] = f.description();
    j["intensity"] = intensity.description();
    j["window"] = to_json(window);
    j["seed"] = seed;
    j.update(to_json(stats));
    write_text_file(o.out, j.dump(2) + "\n");
    out << "check=" << stats.check << " mean=" << detail::format_double(stats.mean)
        << " reference=" << detail::format_double(stats.reference) << " z=" << detail::format_double(stats.z_score)
        << " out=" << o.out << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    configure_logging();
    CLI::App app{"Random-zero entire functions: sample, evaluate and verify Weierstrass products", "rze"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    app.footer("Any subcommand also accepts --config <file.json>: a JSON object of option names to values, "
               "applied before the explicit flags.");

    SampleOptions so;
    auto* sample = app.add_subcommand("sample", "Sample a (marked) Poisson configuration to JSON");
    sample->add_option("--intensity", so.intensity, "lebesgue:<c> | radial:exp:<l>[:<c>] | radial:power:<a>[:<c>]");
    sample->add_option("--window", so.window, "disk:<R> | annulus:<r>:<R>")->required();
    sample->add_option("--marks", so.marks, "deterministic:<n> | geometric:<q> | zeta:<s>[:<n_max>]");
    sample->add_option("--seed", so.seed, "master seed (required)");
    sample->add_option("--out", so.out, "output configuration JSON");

    GridOptions go;
    auto* grid = app.add_subcommand("grid", "Evaluate log|Pi| and arg Pi on a rectangular grid");
    grid->add_option("--input", go.input, "configuration JSON")->required();
    grid->add_option("-p,--genus", go.genus, "genus p");
    grid->add_option("--radius", go.radius, "certified evaluation radius R")->required();
    grid->add_option("--grid", go.grid, "re_min:re_max:im_min:im_max:nx:ny (default: square inscribed in B_R, 101x101)");
    grid->add_option("--confidence", go.confidence, "confidence level of the tail bound");
    grid->add_flag("--no-certificate", go.no_certificate, "evaluate without a tail certificate (allows p < 2)");
    grid->add_option("--intensity", go.intensity, "sampling intensity (overrides the file's record)");
    grid->add_option("--marks", go.marks, "mark distribution (overrides the file's record)");
    grid->add_option("--out", go.out, "grid CSV path");
    grid->add_option("--sidecar", go.sidecar, "provenance JSON path (default: <out>.json)");
    grid->add_option("--threads", go.threads, "worker threads");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Check zeros and multiplicities by argument-principle contour counts");
    verify->add_option("--input", vo.input, "configuration JSON")->required();
    verify->add_option("-p,--genus", vo.genus, "genus p");
    verify->add_option("--radius", vo.radius, "evaluation radius R")->required();
    verify->add_option("--intensity", vo.intensity, "sampling intensity (overrides the file's record)");
    verify->add_option("--marks", vo.marks, "mark distribution (overrides the file's record)");
    verify->add_option("--out", vo.out, "ZeroReport JSON path");
    verify->add_option("--threads", vo.threads, "worker threads");

    CampbellOptions co;
    auto* campbell = app.add_subcommand("campbell", "Monte Carlo check of the Campbell or Laplace identity");
    campbell->add_option("--check", co.check, "campbell | laplace");
    campbell->add_option("--function,-f", co.function,
                         "zero | indicator:<r>[:<h>] | gaussian:<a>[:<amp>] | poly:<r>[:<amp>] | quadratic:<r> | kill:<r>");
    campbell->add_option("--intensity", co.intensity, "sampling intensity");
    campbell->add_option("--window", co.window, "sampling window");
    campbell->add_option("--trials", co.trials, "number of independent configurations");
    campbell->add_option("--seed", co.seed, "master seed (required)");
    campbell->add_option("--out", co.out, "statistics JSON path");
    campbell->add_option("--threads", co.threads, "worker threads");

    try {
        std::vector<std::string> expanded = expand_config(args);
        std::reverse(expanded.begin(), expanded.end());
        try {
            app.parse(std::move(expanded));
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            return fail(err, "validation", e.what(), kExitValidation);
        }
        if (*sample) {
            return cmd_sample(so, out);
        }
        if (*grid) {
            return cmd_grid(go, out);
        }
        if (*verify) {
            return cmd_verify(vo, out);
        }
        return cmd_campbell(co, out);
    } catch (const Error& e) {
        const bool invalid = e.kind() == ErrorKind::validation || e.kind() == ErrorKind::domain;
        return fail(err, to_string(e.kind()), e.what(), invalid ? kExitValidation : kExitRuntime);
    } catch (const std::exception& e) {
        return fail(err, "runtime", e.what(), kExitRuntime);
    }
}

}  // namespace rze::cli
