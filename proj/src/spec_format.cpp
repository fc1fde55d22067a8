#include "steinlab/spec_format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "steinlab/error.hpp"

namespace steinlab {

namespace {

struct Value {
    enum class Kind { scalar, spec, list };
    Kind kind = Kind::scalar;
    std::size_t pos = 0;
    std::string text;
    DistPtr spec;
    std::vector<Value> items;
};

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    DistPtr parse_all() {
        DistPtr d = spec();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return d;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SpecSyntaxError(what, pos_); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t pos) const { throw SpecSyntaxError(what, pos); }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    void expect(char c) {
        if (peek() != c) {
            if (at_end()) fail(std::string("expected '") + c + "' but the text ended");
            fail(std::string("expected '") + c + "', found '" + peek() + "'");
        }
        ++pos_;
    }

    std::string identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        if (pos_ == start) fail(at_end() ? "expected a name but the text ended" : "expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    static bool terminator(char c) { return c == ',' || c == ';' || c == ')' || c == ']' || c == '\0'; }

    Value value() {
        Value v;
        v.pos = pos_;
        if (peek() == '(') {
            ++pos_;
            v.kind = Value::Kind::spec;
            v.spec = spec();
            expect(')');
        } else if (peek() == '[') {
            ++pos_;
            v.kind = Value::Kind::list;
            if (peek() != ']') {
                for (;;) {
                    v.items.push_back(list_item());
                    if (peek() == ';') {
                        ++pos_;
                        continue;
                    }
                    break;
                }
            }
            expect(']');
        } else {
            while (!terminator(peek())) ++pos_;
            v.text = std::string(s_.substr(v.pos, pos_ - v.pos));
            if (v.text.empty()) fail("expected a value");
        }
        return v;
    }

    Value list_item() {
        if (peek() == '(' || std::isalpha(static_cast<unsigned char>(peek()))) {
            Value v;
            v.pos = pos_;
            v.kind = Value::Kind::spec;
            if (peek() == '(') {
                ++pos_;
                v.spec = spec();
                expect(')');
            } else {
                v.spec = spec();
            }
            return v;
        }
        return value();
    }

    DistPtr spec() {
        const std::size_t family_pos = pos_;
        const std::string family = identifier();
        std::map<std::string, Value> params;
        std::map<std::string, std::size_t> key_pos;
        expect(':');
        for (;;) {
            const std::size_t kp = pos_;
            const std::string key = identifier();
            if (params.count(key)) fail_at("duplicate parameter '" + key + "'", kp);
            expect('=');
            params[key] = value();
            key_pos[key] = kp;
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        return build(family, family_pos, params, key_pos);
    }

    DistPtr build(const std::string& family, std::size_t family_pos, std::map<std::string, Value>& params,
                  const std::map<std::string, std::size_t>& key_pos) {
        auto allow = [&](std::initializer_list<const char*> keys) {
            for (const auto& [k, v] : params) {
                bool known = false;
                for (const char* a : keys) known = known || k == a;
                if (!known) fail_at("unknown parameter '" + k + "' for family '" + family + "'", key_pos.at(k));
            }
            for (const char* a : keys) {
                if (!params.count(a)) fail("missing parameter '" + std::string(a) + "' for family '" + family + "'");
            }
        };
        auto number_of = [&](const Value& v, const std::string& what) {
            if (v.kind != Value::Kind::scalar) fail_at("parameter '" + what + "' must be a number", v.pos);
            double x = 0.0;
            const char* b = v.text.data();
            const char* e = b + v.text.size();
            auto [ptr, ec] = std::from_chars(b, e, x);
            if (ec != std::errc() || ptr != e) fail_at("'" + v.text + "' is not a number", v.pos);
            if (!std::isfinite(x)) fail_at("parameter '" + what + "' must be finite", v.pos);
            return x;
        };
        auto num = [&](const char* key) { return number_of(params.at(key), key); };
        auto numbers = [&](const char* key) {
            const Value& v = params.at(key);
            if (v.kind != Value::Kind::list) fail_at("parameter '" + std::string(key) + "' must be a list [a;b;...]", v.pos);
            std::vector<double> out;
            for (const Value& item : v.items) out.push_back(number_of(item, key));
            return out;
        };
        auto dist = [&](const char* key) {
            const Value& v = params.at(key);
            if (v.kind != Value::Kind::spec) fail_at("parameter '" + std::string(key) + "' must be a nested spec (...)", v.pos);
            return v.spec;
        };

        if (family == "gamma") {
            allow({"r", "alpha"});
            return make_gamma(num("r"), num("alpha"));
        }
        if (family == "exponential") {
            allow({"alpha"});
            return make_exponential(num("alpha"));
        }
        if (family == "uniform") {
            allow({"a", "b"});
            return make_uniform(num("a"), num("b"));
        }
        if (family == "point") {
            allow({"c"});
            return make_point(num("c"));
        }
        if (family == "discrete") {
            allow({"x", "p"});
            return make_discrete(numbers("x"), numbers("p"));
        }
        if (family == "poisson") {
            allow({"lambda"});
            return make_poisson(num("lambda"));
        }
        if (family == "geometric") {
            allow({"p"});
            return make_geometric(num("p"));
        }
        if (family == "nb") {
            allow({"kappa", "p"});
            return make_negative_binomial(num("kappa"), num("p"));
        }
        if (family == "logarithmic") {
            allow({"p"});
            return make_logarithmic(num("p"));
        }
        if (family == "levyjump") {
            allow({"delta"});
            return make_gamma_levy_jump(num("delta"));
        }
        if (family == "scaled") {
            allow({"c", "inner"});
            return make_scaled(num("c"), dist("inner"));
        }
        if (family == "conv") {
            allow({"parts"});
            const Value& v = params.at("parts");
            if (v.kind != Value::Kind::list) fail_at("parameter 'parts' must be a list [spec;spec;...]", v.pos);
            std::vector<DistPtr> parts;
            for (const Value& item : v.items) {
                if (item.kind != Value::Kind::spec) fail_at("conv parts must be specs", item.pos);
                parts.push_back(item.spec);
            }
            return make_convolution(std::move(parts));
        }
        if (family == "cp") {
            allow({"lambda", "jump"});
            return make_compound_poisson(num("lambda"), dist("jump"));
        }
        if (family == "empirical") {
            allow({"samples"});
            return make_empirical(numbers("samples"));
        }
        if (family == "bias") {
            allow({"kind", "inner"});
            const Value& k = params.at("kind");
            if (k.kind != Value::Kind::scalar) fail_at("parameter 'kind' must be size|zero|equilibrium", k.pos);
            return make_biased(parse_bias_kind(k.text), dist("inner"));
        }
        fail_at("unknown family '" + family + "'", family_pos);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string num_text(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string list_text(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ';';
        out += num_text(xs[i]);
    }
    return out + "]";
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> json_numbers(const nlohmann::json& j, const char* key) {
    return j.at(key).get<std::vector<double>>();
}

}  // namespace

DistPtr parse_dist(std::string_view text) { return Parser(text).parse_all(); }

std::string format_dist(const Dist& d) {
    return std::visit(
        Overloaded{
            [](const family::Gamma& g) { return "gamma:r=" + num_text(g.r) + ",alpha=" + num_text(g.alpha); },
            [](const family::Exponential& e) { return "exponential:alpha=" + num_text(e.alpha); },
            [](const family::Uniform& u) { return "uniform:a=" + num_text(u.a) + ",b=" + num_text(u.b); },
            [](const family::Discrete& x) {
                if (x.x.size() == 1) return "point:c=" + num_text(x.x[0]);
                return "discrete:x=" + list_text(x.x) + ",p=" + list_text(x.p);
            },
            [](const family::Poisson& p) { return "poisson:lambda=" + num_text(p.lambda); },
            [](const family::Geometric& g) { return "geometric:p=" + num_text(g.p); },
            [](const family::NegativeBinomial& n) {
                return "nb:kappa=" + num_text(n.kappa) + ",p=" + num_text(n.p);
            },
            [](const family::Logarithmic& l) { return "logarithmic:p=" + num_text(l.p); },
            [](const family::GammaLevyJump& l) { return "levyjump:delta=" + num_text(l.delta); },
            [](const family::Scaled& s) { return "scaled:c=" + num_text(s.c) + ",inner=(" + format_dist(*s.inner) + ")"; },
            [](const family::Convolution& c) {
                std::string out = "conv:parts=[";
                for (std::size_t i = 0; i < c.parts.size(); ++i) {
                    if (i) out += ';';
                    out += "(" + format_dist(*c.parts[i]) + ")";
                }
                return out + "]";
            },
            [](const family::CompoundPoisson& cp) {
                return "cp:lambda=" + num_text(cp.lambda) + ",jump=(" + format_dist(*cp.jump) + ")";
            },
            [](const family::Empirical& e) { return "empirical:samples=" + list_text(e.samples); },
            [](const family::Numeric&) -> std::string {
                throw DomainError("numeric laws have no text form; use the JSON form");
            },
            [](const family::Biased& b) {
                return "bias:kind=" + std::string(to_string(b.kind)) + ",inner=(" + format_dist(*b.inner) + ")";
            },
        },
        d.variant());
}

nlohmann::json to_json(const NumericLaw& law) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : law.atoms().atoms()) atoms.push_back({a.x, a.p});
    return {{"nodes", std::vector<double>(law.nodes().begin(), law.nodes().end())},
            {"cdf", std::vector<double>(law.continuous_cdf().begin(), law.continuous_cdf().end())},
            {"atoms", atoms},
            {"tol", law.tol()},
            {"l1_error", law.l1_error()},
            {"lower", law.lower()},
            {"upper", law.upper()},
            {"tail", law.tail()}};
}

NumericLaw numeric_law_from_json(const nlohmann::json& j) {
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
    }
    return NumericLaw(json_numbers(j, "nodes"), json_numbers(j, "cdf"), std::move(atoms), j.at("tol").get<double>(),
                      j.value("l1_error", 0.0));
}

nlohmann::json to_json(const Dist& d) {
    using nlohmann::json;
    return std::visit(
        Overloaded{
            [](const family::Gamma& g) { return json{{"family", "gamma"}, {"r", g.r}, {"alpha", g.alpha}}; },
            [](const family::Exponential& e) { return json{{"family", "exponential"}, {"alpha", e.alpha}}; },
            [](const family::Uniform& u) { return json{{"family", "uniform"}, {"a", u.a}, {"b", u.b}}; },
            [](const family::Discrete& x) {
                if (x.x.size() == 1) return json{{"family", "point"}, {"c", x.x[0]}};
                return json{{"family", "discrete"}, {"x", x.x}, {"p", x.p}};
            },
            [](const family::Poisson& p) { return json{{"family", "poisson"}, {"lambda", p.lambda}}; },
            [](const family::Geometric& g) { return json{{"family", "geometric"}, {"p", g.p}}; },
            [](const family::NegativeBinomial& n) { return json{{"family", "nb"}, {"kappa", n.kappa}, {"p", n.p}}; },
            [](const family::Logarithmic& l) { return json{{"family", "logarithmic"}, {"p", l.p}}; },
            [](const family::GammaLevyJump& l) { return json{{"family", "levyjump"}, {"delta", l.delta}}; },
            [](const family::Scaled& s) { return json{{"family", "scaled"}, {"c", s.c}, {"inner", to_json(*s.inner)}}; },
            [](const family::Convolution& c) {
                json parts = json::array();
                for (const DistPtr& p : c.parts) parts.push_back(to_json(*p));
                return json{{"family", "conv"}, {"parts", parts}};
            },
            [](const family::CompoundPoisson& cp) {
                return json{{"family", "cp"}, {"lambda", cp.lambda}, {"jump", to_json(*cp.jump)}};
            },
            [](const family::Empirical& e) { return json{{"family", "empirical"}, {"samples", e.samples}}; },
            [](const family::Numeric& n) { return json{{"family", "numeric"}, {"law", to_json(*n.law)}}; },
            [](const family::Biased& b) {
                return json{{"family", "bias"}, {"kind", std::string(to_string(b.kind))}, {"inner", to_json(*b.inner)}};
            },
        },
        d.variant());
}

DistPtr dist_from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    auto num = [&](const char* key) { return j.at(key).get<double>(); };
    if (family == "gamma") return make_gamma(num("r"), num("alpha"));
    if (family == "exponential") return make_exponential(num("alpha"));
    if (family == "uniform") return make_uniform(num("a"), num("b"));
    if (family == "point") return make_point(num("c"));
    if (family == "discrete") return make_discrete(json_numbers(j, "x"), json_numbers(j, "p"));
    if (family == "poisson") return make_poisson(num("lambda"));
    if (family == "geometric") return make_geometric(num("p"));
    if (family == "nb") return make_negative_binomial(num("kappa"), num("p"));
    if (family == "logarithmic") return make_logarithmic(num("p"));
    if (family == "levyjump") return make_gamma_levy_jump(num("delta"));
    if (family == "scaled") return make_scaled(num("c"), dist_from_json(j.at("inner")));
    if (family == "conv") {
        std::vector<DistPtr> parts;
        for (const auto& p : j.at("parts")) parts.push_back(dist_from_json(p));
        return make_convolution(std::move(parts));
    }
    if (family == "cp") return make_compound_poisson(num("lambda"), dist_from_json(j.at("jump")));
    if (family == "empirical") return make_empirical(json_numbers(j, "samples"));
    if (family == "numeric") return make_numeric(numeric_law_from_json(j.at("law")));
    if (family == "bias") {
        return make_biased(parse_bias_kind(j.at("kind").get<std::string>()), dist_from_json(j.at("inner")));
    }
    throw DomainError("unknown family '" + family + "'");
}

}  // namespace steinlab
