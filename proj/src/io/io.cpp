#include "levyqsd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "levyqsd/error.hpp"

namespace levyqsd::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key)) schema(std::string(where) + ": missing \"" + key + "\"");
    return obj.at(key);
}

double number(const json& v, const char* what) {
    if (!v.is_number()) schema(std::string(what) + " must be a number");
    return v.get<double>();
}

double number_or_infinity(const json& v, double inf, const char* what) {
    if (v.is_null()) return inf;
    return number(v, what);
}

/// Polynomial exponent sum a_i eta^i.
GenericExponent polynomial_exponent(std::vector<double> coeffs, double lo, double hi, bool asserted) {
    auto derivative = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
        return d;
    };
    auto horner = [](std::vector<double> c) {
        return [c = std::move(c)](double x) {
            double s = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
            return s;
        };
    };
    GenericExponent g;
    std::ostringstream label;
    label.precision(17);
    label << "polynomial[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) label << (i ? ", " : "") << coeffs[i];
    label << ']';
    g.label = label.str();
    g.psi = horner(coeffs);
    std::vector<double> d = coeffs;
    for (auto& slot : g.derivs) {
        d = derivative(d);
        slot = horner(d);
    }
    g.domain_lo = lo;
    g.domain_hi = hi;
    g.analyticity_asserted = asserted;
    return g;
}

std::vector<double> grid_from_json(const json& v, const char* what) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(number(e, what));
        return out;
    }
    if (v.is_object()) {
        const double from = number(require(v, "from", what), what);
        const double to = number(require(v, "to", what), what);
        const json& cnt = require(v, "count", what);
        if (!cnt.is_number_integer() || cnt.get<long long>() < 1) schema(std::string(what) + ".count must be >= 1");
        const auto n = static_cast<std::size_t>(cnt.get<long long>());
        const std::string spacing = v.value("spacing", std::string("log"));
        if (spacing == "log") return log_grid(from, to, n);
        if (spacing == "linear") return linear_grid(from, to, n);
        schema(std::string(what) + ".spacing must be \"log\" or \"linear\"");
    }
    schema(std::string(what) + " must be a list of numbers or a {from, to, count} object");
}

}  // namespace

LevyModel model_from_json(const json& doc) {
    const std::string kind_s = require(doc, "kind", "model").get<std::string>();
    Kind kind{};
    if (kind_s == "sn") {
        kind = Kind::SpectrallyNegative;
    } else if (kind_s == "sp") {
        kind = Kind::SpectrallyPositive;
    } else {
        schema("model.kind must be \"sn\" or \"sp\"");
    }
    const json& fam = require(doc, "family", "model");
    if (!fam.is_string()) schema("model.family must be a string");
    const json& p = require(doc, "params", "model");
    if (!p.is_object()) schema("model.params must be an object");
    const std::string family = fam.get<std::string>();

    if (family == "cp_erlang") {
        const json& shape = require(p, "shape", "model.params");
        if (!shape.is_number_integer()) schema("model.params.shape must be an integer");
        return LevyModel(kind, CompoundPoissonErlang{number(require(p, "lambda", "model.params"), "lambda"),
                                                     shape.get<int>(),
                                                     number(require(p, "nu", "model.params"), "nu")});
    }
    if (family == "brownian") {
        return LevyModel(kind, LinearBrownian{number(require(p, "sigma", "model.params"), "sigma"),
                                              number(require(p, "c", "model.params"), "c")});
    }
    if (family == "generic") {
        const json& c = require(p, "coefficients", "model.params");
        if (!c.is_array() || c.empty()) schema("model.params.coefficients must be a non-empty list");
        std::vector<double> coeffs;
        for (const auto& e : c) coeffs.push_back(number(e, "coefficient"));
        const double inf = std::numeric_limits<double>::infinity();
        double lo = -inf;
        double hi = inf;
        if (p.contains("domain")) {
            const json& d = p.at("domain");
            if (!d.is_array() || d.size() != 2) schema("model.params.domain must be [lo, hi]");
            lo = number_or_infinity(d[0], -inf, "domain");
            hi = number_or_infinity(d[1], inf, "domain");
        }
        const bool asserted = p.value("analyticity_asserted", false);
        return LevyModel(kind, polynomial_exponent(std::move(coeffs), lo, hi, asserted));
    }
    schema("model.family must be cp_erlang, brownian or generic");
}

json model_to_json(const LevyModel& model) {
    json out;
    out["kind"] = std::string(to_string(model.kind()));
    if (const auto* cp = std::get_if<CompoundPoissonErlang>(&model.family())) {
        out["family"] = "cp_erlang";
        out["params"] = {{"lambda", cp->lambda}, {"shape", cp->shape}, {"nu", cp->nu}};
    } else if (const auto* b = std::get_if<LinearBrownian>(&model.family())) {
        out["family"] = "brownian";
        out["params"] = {{"sigma", b->sigma}, {"c", b->c}};
    } else {
        throw Error(ErrorCode::Unsupported, "generic models keep their source document; serialize that instead");
    }
    return out;
}

json read_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        schema(file.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& file, const json& doc) {
    std::ofstream out(file);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + file.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + file.string());
}

LevyModel load_model(const std::filesystem::path& file) { return model_from_json(read_json(file)); }

StudySpec study_from_json(const json& doc_in, const std::filesystem::path& base_dir) {
    const json& doc = doc_in.is_object() && doc_in.contains("study") ? doc_in.at("study") : doc_in;
    if (!doc.is_object()) schema("study must be a JSON object");
    StudySpec s;
    try {
        if (doc.contains("model")) {
            s.model = doc.at("model");
        } else if (doc.contains("model_file")) {
            s.model = read_json(base_dir / doc.at("model_file").get<std::string>());
        } else {
            schema("study needs \"model\" or \"model_file\"");
        }
        (void)model_from_json(s.model);

        if (doc.contains("points")) {
            s.points.clear();
            for (const auto& pt : doc.at("points")) {
                if (!pt.is_array() || pt.size() != 2) schema("points must be [alpha, beta] pairs");
                s.points.emplace_back(number(pt[0], "alpha"), number(pt[1], "beta"));
            }
        } else if (doc.contains("alpha") || doc.contains("beta")) {
            s.points = {{doc.contains("alpha") ? number(doc.at("alpha"), "alpha") : 0.0,
                         doc.contains("beta") ? number(doc.at("beta"), "beta") : 0.0}};
        }
        if (doc.contains("times")) s.times = grid_from_json(doc.at("times"), "times");
        if (doc.contains("thetas")) s.thetas = grid_from_json(doc.at("thetas"), "thetas");
        if (doc.contains("inversion")) {
            const json& inv = doc.at("inversion");
            s.inversion.terms = inv.value("terms", s.inversion.terms);
            s.inversion.precision_target = inv.value("precision_target", s.inversion.precision_target);
            s.inversion.abscissa_shift = inv.value("abscissa_shift", s.inversion.abscissa_shift);
            s.inversion.t_min = inv.value("t_min", s.inversion.t_min);
        }
        if (doc.contains("simulation")) {
            const json& sim = doc.at("simulation");
            s.simulation.enabled = sim.value("enabled", true);
            s.simulation.replications = sim.value("replications", s.simulation.replications);
            s.simulation.seed = sim.value("seed", s.simulation.seed);
            const std::string tilt = sim.value("tilt", std::string("theta_star"));
            if (tilt == "theta_star") {
                s.simulation.tilt = Tilt::ThetaStar;
            } else if (tilt == "none") {
                s.simulation.tilt = Tilt::None;
            } else {
                schema("simulation.tilt must be \"none\" or \"theta_star\"");
            }
            if (sim.contains("brownian_step") && !sim.at("brownian_step").is_null()) {
                s.simulation.brownian_step = number(sim.at("brownian_step"), "brownian_step");
            }
        }
        if (doc.contains("simulate")) s.simulation.enabled = doc.at("simulate").get<bool>();
        if (doc.contains("density")) {
            const json& d = doc.at("density");
            const std::string which = d.value("which", std::string("mu"));
            if (which == "mu") {
                s.density = DensityKind::Mu;
            } else if (which == "xi") {
                s.density = DensityKind::Xi;
            } else {
                schema("density.which must be \"mu\" or \"xi\"");
            }
            if (d.contains("x")) s.x_grid = grid_from_json(d.at("x"), "density.x");
            if (d.contains("y")) s.y_grid = grid_from_json(d.at("y"), "density.y");
        }
        if (doc.contains("output")) s.out_dir = doc.at("output").value("dir", s.out_dir);
        if (doc.contains("threads")) s.threads = doc.at("threads").get<unsigned>();
    } catch (const json::exception& e) {
        schema(std::string("study: ") + e.what());
    }
    return s;
}

StudySpec load_study(const std::filesystem::path& file) {
    return study_from_json(read_json(file), file.parent_path());
}

json study_to_json(const StudySpec& s) {
    json out;
    out["model"] = s.model;
    json pts = json::array();
    for (const auto& [a, b] : s.points) pts.push_back({a, b});
    out["points"] = pts;
    out["times"] = s.times;
    out["thetas"] = s.thetas;
    out["inversion"] = {{"method", "euler"},
                        {"terms", s.inversion.terms},
                        {"precision_target", s.inversion.precision_target},
                        {"abscissa_shift", s.inversion.abscissa_shift},
                        {"t_min", s.inversion.t_min}};
    json sim = {{"enabled", s.simulation.enabled},
                {"replications", s.simulation.replications},
                {"seed", s.simulation.seed},
                {"tilt", std::string(to_string(s.simulation.tilt))}};
    sim["brownian_step"] = s.simulation.brownian_step ? json(*s.simulation.brownian_step) : json(nullptr);
    out["simulation"] = sim;
    out["density"] = {{"which", std::string(to_string(s.density))}, {"x", s.x_grid}, {"y", s.y_grid}};
    out["output"] = {{"dir", s.out_dir}};
    out["threads"] = s.threads;
    return out;
}

void validate_study(const StudySpec& s) {
    auto sorted = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i] > v[i - 1])) return false;
        }
        return true;
    };
    if (s.points.empty()) schema("study has no (alpha, beta) points");
    if (!sorted(s.times)) schema("times must be strictly increasing");
    if (!sorted(s.x_grid) || !sorted(s.y_grid)) schema("density grids must be strictly increasing");
    try {
        s.inversion.validate();
    } catch (const Error& e) {
        schema(std::string("inversion: ") + e.what());
    }
}

std::vector<double> log_grid(double from, double to, std::size_t count) {
    if (!(from > 0.0 && to >= from) || count == 0) {
        throw Error(ErrorCode::SchemaError, "log grid needs 0 < from <= to and count >= 1");
    }
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = from;
        return out;
    }
    // Powers of the ratio keep round points exact (5:80:5 gives 10, 20, 40).
    const double ratio = to / from;
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = from * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1));
    }
    out.front() = from;
    out.back() = to;
    return out;
}

std::vector<double> linear_grid(double from, double to, std::size_t count) {
    if (!(to >= from) || count == 0) throw Error(ErrorCode::SchemaError, "linear grid needs from <= to, count >= 1");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    if (count > 1) out.back() = to;
    return out;
}

std::vector<double> parse_log_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw Error(ErrorCode::SchemaError, "grid must look like a:b:n");
    try {
        std::size_t used = 0;
        const double a = std::stod(text.substr(0, c1));
        const double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const long n = std::stol(text.substr(c2 + 1), &used);
        if (used != text.size() - c2 - 1 || n < 1) throw std::invalid_argument("count");
        return log_grid(a, b, static_cast<std::size_t>(n));
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::SchemaError, "grid must look like a:b:n, got \"" + text + "\"");
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string_view to_string(Tilt tilt) noexcept { return tilt == Tilt::ThetaStar ? "theta_star" : "none"; }

std::string_view to_string(DensityKind kind) noexcept { return kind == DensityKind::Mu ? "mu" : "xi"; }

}  // namespace levyqsd::io
