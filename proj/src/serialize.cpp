#include "pia/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pia {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) {
    throw std::invalid_argument("parse error: " + what);
}

double need_number(const json& params, const char* key) {
    if (!params.contains(key) || !params[key].is_number())
        parse_error(std::string("missing numeric parameter \"") + key + "\"");
    return params[key].get<double>();
}

double number_or(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) parse_error(std::string("parameter \"") + key + "\" not numeric");
    return params[key].get<double>();
}

// Shorthand tail: comma-separated values, each positional or key=value.
struct Args {
    std::vector<double> positional;
    std::map<std::string, double> named;

    double get(std::size_t pos, const char* key, double fallback) const {
        if (auto it = named.find(key); it != named.end()) return it->second;
        if (pos < positional.size()) return positional[pos];
        return fallback;
    }
    double require(std::size_t pos, const char* key) const {
        if (auto it = named.find(key); it != named.end()) return it->second;
        if (pos < positional.size()) return positional[pos];
        parse_error(std::string("missing parameter \"") + key + "\"");
    }
};

Args parse_args(const std::string& tail) {
    Args args;
    std::stringstream ss(tail);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        const std::string num = eq == std::string::npos ? tok : tok.substr(eq + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(num, &used);
        } catch (const std::exception&) {
            parse_error("bad numeric token \"" + tok + "\"");
        }
        if (used != num.size()) parse_error("bad numeric token \"" + tok + "\"");
        if (eq == std::string::npos) args.positional.push_back(value);
        else args.named[tok.substr(0, eq)] = value;
    }
    return args;
}

json json_from_text_or_file(const std::string& text) {
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) return json::parse(text);
    std::ifstream in(text);
    if (!in) parse_error("cannot open file \"" + text + "\"");
    json j;
    in >> j;
    return j;
}

} // namespace

std::string format_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// --- curves ----------------------------------------------------------------

std::unique_ptr<RevenueCurve> curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        parse_error("curve document needs a \"family\" string");
    const std::string family = j["family"].get<std::string>();
    const json params = j.value("params", json::object());

    if (family == "triangle")
        return std::make_unique<TriangleCurve>(need_number(params, "peak_quantile"),
                                               number_or(params, "peak_revenue", 1.0));
    if (family == "uniform")
        return std::make_unique<UniformCurve>(number_or(params, "low", 0.0),
                                              number_or(params, "high", 1.0));
    if (family == "exponential")
        return std::make_unique<ExponentialCurve>(number_or(params, "rate", 1.0));
    if (family == "truncated_equal_revenue")
        return std::make_unique<TruncatedEqualRevenueCurve>(need_number(params, "floor"),
                                                            need_number(params, "cap"),
                                                            number_or(params, "mix", 0.25));
    if (family == "piecewise_linear") {
        if (!params.contains("knots") || !params["knots"].is_array())
            parse_error("piecewise_linear needs a \"knots\" array of [q, R] pairs");
        std::vector<PiecewiseLinearCurve::Knot> knots;
        std::size_t idx = 0;
        for (const auto& k : params["knots"]) {
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                parse_error("knot " + std::to_string(idx) + " is not a [q, R] pair");
            knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            ++idx;
        }
        auto curve = std::make_unique<PiecewiseLinearCurve>(std::move(knots));
        validate_concave_knots(curve->knots());
        return curve;
    }
    parse_error("unknown curve family \"" + family + "\"");
}

json curve_to_json(const RevenueCurve& curve) {
    json j;
    if (auto* t = dynamic_cast<const TriangleCurve*>(&curve)) {
        j["family"] = "triangle";
        j["params"] = {{"peak_quantile", t->peak_quantile()}, {"peak_revenue", t->peak_revenue()}};
    } else if (auto* u = dynamic_cast<const UniformCurve*>(&curve)) {
        j["family"] = "uniform";
        j["params"] = {{"low", 0.0}, {"high", u->high()}};
    } else if (auto* e = dynamic_cast<const ExponentialCurve*>(&curve)) {
        j["family"] = "exponential";
        j["params"] = {{"rate", e->rate()}};
    } else if (auto* t2 = dynamic_cast<const TruncatedEqualRevenueCurve*>(&curve)) {
        j["family"] = "truncated_equal_revenue";
        j["params"] = {{"floor", t2->floor_value()}, {"cap", t2->cap()}, {"mix", t2->mix()}};
    } else if (auto* p = dynamic_cast<const PiecewiseLinearCurve*>(&curve)) {
        j["family"] = "piecewise_linear";
        json knots = json::array();
        for (const auto& [q, r] : p->knots()) knots.push_back(json::array({q, r}));
        j["params"] = {{"knots", std::move(knots)}};
    } else {
        parse_error("unknown curve type");
    }
    return j;
}

std::unique_ptr<RevenueCurve> curve_from_text(const std::string& text) {
    if (text.empty()) parse_error("empty curve description");
    if (text.front() == '{' || text.find(".json") != std::string::npos)
        return curve_from_json(json_from_text_or_file(text));

    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const Args args = parse_args(colon == std::string::npos ? "" : text.substr(colon + 1));

    if (name == "triangle")
        return std::make_unique<TriangleCurve>(args.require(0, "peak_quantile"),
                                               args.get(1, "peak_revenue", 1.0));
    if (name == "uniform") {
        if (args.positional.size() >= 2 || args.named.count("low"))
            return std::make_unique<UniformCurve>(args.get(0, "low", 0.0),
                                                  args.get(1, "high", 1.0));
        return std::make_unique<UniformCurve>(0.0, args.get(0, "high", 1.0));
    }
    if (name == "exponential")
        return std::make_unique<ExponentialCurve>(args.get(0, "rate", 1.0));
    if (name == "trunc_er" || name == "truncated_equal_revenue")
        return std::make_unique<TruncatedEqualRevenueCurve>(
            args.require(0, "floor"), args.require(1, "cap"), args.get(2, "mix", 0.25));
    return curve_from_json(json_from_text_or_file(text)); // assume a file path
}

// --- mechanisms --------------------------------------------------------------

MechanismSpec mechanism_from_json(const json& j) {
    if (!j.is_object() || !j.contains("mechanism") || !j["mechanism"].is_string())
        parse_error("mechanism document needs a \"mechanism\" string");
    const std::string name = j["mechanism"].get<std::string>();
    const json params = j.value("params", json::object());

    MechanismSpec spec;
    if (name == "spa") spec = SpaSpec{};
    else if (name == "reserve_spa") spec = ReserveSpaSpec{need_number(params, "r")};
    else if (name == "inflated_spa") spec = InflatedSpaSpec{need_number(params, "delta")};
    else if (name == "mixed_inflated_spa")
        spec = MixedInflatedSpaSpec{need_number(params, "epsilon"), need_number(params, "delta")};
    else if (name == "post_the_sample") spec = PostTheSampleSpec{number_or(params, "alpha", 1.0)};
    else if (name == "randomized_pts")
        spec = RandomizedPtsSpec{need_number(params, "zeta"), need_number(params, "rho"),
                                 need_number(params, "epsilon"), need_number(params, "delta")};
    else parse_error("unknown mechanism \"" + name + "\"");
    validate(spec);
    return spec;
}

json mechanism_to_json(const MechanismSpec& spec) {
    json j;
    j["mechanism"] = mechanism_name(spec);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SpaSpec>) {
                j["params"] = json::object();
            } else if constexpr (std::is_same_v<T, ReserveSpaSpec>) {
                j["params"] = {{"r", s.reserve}};
            } else if constexpr (std::is_same_v<T, InflatedSpaSpec>) {
                j["params"] = {{"delta", s.delta}};
            } else if constexpr (std::is_same_v<T, MixedInflatedSpaSpec>) {
                j["params"] = {{"epsilon", s.epsilon}, {"delta", s.delta}};
            } else if constexpr (std::is_same_v<T, PostTheSampleSpec>) {
                j["params"] = {{"alpha", s.alpha}};
            } else if constexpr (std::is_same_v<T, RandomizedPtsSpec>) {
                j["params"] = {{"zeta", s.zeta},
                               {"rho", s.rho},
                               {"epsilon", s.epsilon},
                               {"delta", s.delta}};
            }
        },
        spec);
    return j;
}

MechanismSpec mechanism_from_text(const std::string& text) {
    if (text.empty()) parse_error("empty mechanism description");
    if (text.front() == '{' || text.find(".json") != std::string::npos)
        return mechanism_from_json(json_from_text_or_file(text));

    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const Args args = parse_args(colon == std::string::npos ? "" : text.substr(colon + 1));

    MechanismSpec spec;
    if (name == "spa") spec = SpaSpec{};
    else if (name == "reserve_spa" || name == "reserve") spec = ReserveSpaSpec{args.require(0, "r")};
    else if (name == "inflated_spa" || name == "inflated")
        spec = InflatedSpaSpec{args.require(0, "delta")};
    else if (name == "mixed_inflated_spa" || name == "mixed")
        spec = MixedInflatedSpaSpec{args.require(0, "epsilon"), args.require(1, "delta")};
    else if (name == "post_the_sample" || name == "pts")
        spec = PostTheSampleSpec{args.get(0, "alpha", 1.0)};
    else if (name == "randomized_pts")
        spec = RandomizedPtsSpec{args.require(0, "zeta"), args.require(1, "rho"),
                                 args.require(2, "epsilon"), args.require(3, "delta")};
    else return mechanism_from_json(json_from_text_or_file(text)); // assume a file path
    validate(spec);
    return spec;
}

// --- reports ------------------------------------------------------------------

std::string scan_to_csv(const ScanResult& scan) {
    // Column set: union of bound names over the grid, in first-seen order.
    std::vector<std::string> columns;
    std::set<std::string> seen;
    for (const ScanPoint& p : scan.points)
        for (const auto& [name, value] : p.bounds)
            if (seen.insert(name).second) columns.push_back(name);

    std::ostringstream os;
    os << "q_star,ratio";
    for (const auto& c : columns) os << ',' << c;
    os << '\n';
    for (const ScanPoint& p : scan.points) {
        os << format_sig(p.q_star, 12) << ',' << format_sig(p.ratio, 12);
        for (const auto& c : columns) {
            os << ',';
            for (const auto& [name, value] : p.bounds)
                if (name == c) {
                    os << format_sig(value, 12);
                    break;
                }
        }
        os << '\n';
    }
    return os.str();
}

json scan_to_json(const ScanResult& scan) {
    json j;
    j["mechanism"] = mechanism_to_json(scan.spec);
    j["n"] = scan.n;
    j["min_ratio"] = scan.min_ratio;
    j["argmin_q_star"] = scan.argmin_q_star;
    json pts = json::array();
    for (const ScanPoint& p : scan.points) {
        json bounds = json::object();
        for (const auto& [name, value] : p.bounds) bounds[name] = value;
        pts.push_back({{"q_star", p.q_star}, {"ratio", p.ratio}, {"bounds", std::move(bounds)}});
    }
    j["points"] = std::move(pts);
    return j;
}

json bound_report_to_json(const BoundReport& report) {
    json j;
    j["bound"] = report.bound;
    j["inputs"] = report.inputs;
    j["value"] = report.value;
    if (report.exact) j["exact"] = *report.exact;
    j["sound"] = report.sound;
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

std::string bound_reports_to_jsonl(const std::vector<BoundReport>& reports) {
    std::ostringstream os;
    for (const BoundReport& r : reports) os << bound_report_to_json(r).dump() << '\n';
    return os.str();
}

} // namespace pia
