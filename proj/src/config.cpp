#include "halrates/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "halrates/errors.hpp"

namespace halrates {

const TomlValue* TomlTable::find(const std::string& key) const {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
}

const TomlTable* TomlTable::sub(const std::string& name) const {
    auto it = subs.find(name);
    return it == subs.end() ? nullptr : &it->second;
}

// ---- TOML-subset parser ----------------------------------------------------

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    long line;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    void skip_ws() {
        while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }
};

[[noreturn]] void fail(long line, const std::string& msg) {
    throw ConfigError(msg, {}, line);
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key(Cursor& c) {
    c.skip_ws();
    std::string key;
    while (!c.done() && is_bare_key_char(c.peek())) key += c.s[c.i++];
    if (key.empty()) fail(c.line, "expected a key");
    return key;
}

TomlValue parse_value(Cursor& c);

TomlValue parse_array(Cursor& c) {
    TomlValue v;
    v.kind = TomlValue::Kind::array;
    v.line = c.line;
    ++c.i; // consume '['
    for (;;) {
        c.skip_ws();
        if (c.done()) fail(c.line, "unterminated array");
        if (c.peek() == ']') {
            ++c.i;
            return v;
        }
        v.items.push_back(parse_value(c));
        c.skip_ws();
        if (c.done()) fail(c.line, "unterminated array");
        if (c.peek() == ',') {
            ++c.i;
            continue;
        }
        if (c.peek() == ']') {
            ++c.i;
            return v;
        }
        fail(c.line, "expected ',' or ']' in array");
    }
}

TomlValue parse_value(Cursor& c) {
    c.skip_ws();
    if (c.done()) fail(c.line, "expected a value");
    TomlValue v;
    v.line = c.line;
    char ch = c.peek();
    if (ch == '"') {
        ++c.i;
        v.kind = TomlValue::Kind::string;
        while (!c.done() && c.peek() != '"') {
            if (c.peek() == '\\') {
                ++c.i;
                if (c.done()) fail(c.line, "dangling escape in string");
                char e = c.s[c.i++];
                switch (e) {
                    case 'n': v.text += '\n'; break;
                    case 't': v.text += '\t'; break;
                    case '"': v.text += '"'; break;
                    case '\\': v.text += '\\'; break;
                    default: fail(c.line, std::string("unsupported escape \\") + e);
                }
            } else if (c.peek() == '\n') {
                fail(c.line, "unterminated string");
            } else {
                v.text += c.s[c.i++];
            }
        }
        if (c.done()) fail(c.line, "unterminated string");
        ++c.i;
        return v;
    }
    if (ch == '[') return parse_array(c);
    // bare token: bool or number
    std::string tok;
    while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '+' ||
                         c.peek() == '-' || c.peek() == '.' || c.peek() == '_'))
        tok += c.s[c.i++];
    if (tok.empty()) fail(c.line, "expected a value");
    if (tok == "true" || tok == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.flag = tok == "true";
        return v;
    }
    std::string digits;
    for (char d : tok)
        if (d != '_') digits += d;
    try {
        std::size_t used = 0;
        v.num = std::stod(digits, &used);
        if (used != digits.size()) fail(c.line, "malformed number '" + tok + "'");
    } catch (const std::exception&) {
        fail(c.line, "malformed value '" + tok + "'");
    }
    v.kind = TomlValue::Kind::number;
    v.text = digits; // raw text, for exact-decimal reinterpretation
    return v;
}

TomlTable* descend(TomlTable& root, const std::string& path, long line) {
    TomlTable* t = &root;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t dot = path.find('.', start);
        std::string part =
            dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
        if (part.empty()) fail(line, "empty table-name component in [" + path + "]");
        t = &t->subs[part];
        if (t->line < 0) t->line = line;
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return t;
}

} // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable root;
    root.line = 0;
    TomlTable* current = &root;
    std::istringstream in(text);
    std::string raw;
    long lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        Cursor c{raw, 0, lineno};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;
        if (c.peek() == '[') {
            ++c.i;
            std::string path;
            while (!c.done() && c.peek() != ']') path += c.s[c.i++];
            if (c.done()) fail(lineno, "unterminated table header");
            ++c.i;
            c.skip_ws();
            if (!c.done() && c.peek() != '#') fail(lineno, "trailing text after table header");
            current = descend(root, path, lineno);
            continue;
        }
        std::string key = parse_key(c);
        c.skip_ws();
        if (c.done() || c.peek() != '=') fail(lineno, "expected '=' after key '" + key + "'");
        ++c.i;
        TomlValue v = parse_value(c);
        c.skip_ws();
        if (!c.done() && c.peek() != '#') fail(lineno, "trailing text after value for '" + key + "'");
        if (current->values.count(key)) fail(lineno, "duplicate key '" + key + "'");
        v.line = lineno;
        current->values[key] = std::move(v);
    }
    return root;
}

// ---- typed accessors -------------------------------------------------------

namespace {

[[noreturn]] void field_fail(const std::string& field, long line, const std::string& msg) {
    throw ConfigError(msg, field, line);
}

const TomlValue& require(const TomlTable& t, const std::string& field, const std::string& key) {
    const TomlValue* v = t.find(key);
    if (!v) field_fail(field + "." + key, t.line, "missing required key");
    return *v;
}

double as_number(const TomlValue& v, const std::string& field) {
    if (v.kind != TomlValue::Kind::number) field_fail(field, v.line, "expected a number");
    return v.num;
}

std::string as_string(const TomlValue& v, const std::string& field) {
    if (v.kind != TomlValue::Kind::string) field_fail(field, v.line, "expected a string");
    return v.text;
}

std::uint64_t as_u64(const TomlValue& v, const std::string& field) {
    double d = as_number(v, field);
    if (d < 0 || d != std::floor(d) || d > 1.8e19)
        field_fail(field, v.line, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(d);
}

BigRat as_exact(const TomlValue& v, const std::string& field) {
    if (v.kind == TomlValue::Kind::string || v.kind == TomlValue::Kind::number) {
        try {
            return rat_from_decimal(v.text);
        } catch (const DomainError& e) {
            field_fail(field, v.line, e.what());
        }
    }
    field_fail(field, v.line, "expected a decimal value");
}

Vec as_vector(const TomlValue& v, const std::string& field) {
    if (v.kind != TomlValue::Kind::array) field_fail(field, v.line, "expected an array of numbers");
    Vec out;
    out.reserve(v.items.size());
    for (std::size_t i = 0; i < v.items.size(); ++i)
        out.push_back(as_number(v.items[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

// ---- claimed-modulus forms -------------------------------------------------

// claim_alpha / claim_beta: { form = "inv_poly", coeff, power, offset }
//   eps -> ceil(coeff / eps^power) + offset
// claim_theta: { form = "poly", coeff, power }
//   n -> ceil(coeff * n^power)
ModulusFn claimed_eps_modulus(const TomlTable& t, const std::string& field, ModulusKind kind,
                              const std::string& name) {
    std::string form = as_string(require(t, field, "form"), field + ".form");
    if (form != "inv_poly")
        field_fail(field + ".form", t.line, "unsupported form '" + form + "' (expected inv_poly)");
    BigRat coeff = t.find("coeff") ? as_exact(*t.find("coeff"), field + ".coeff") : BigRat(1);
    std::uint64_t power = t.find("power") ? as_u64(*t.find("power"), field + ".power") : 1;
    std::uint64_t offset = t.find("offset") ? as_u64(*t.find("offset"), field + ".offset") : 0;
    if (coeff < 0) field_fail(field + ".coeff", t.line, "coefficient must be >= 0");
    auto rule = [coeff, power, offset](const BigRat& eps) {
        BigRat p(1);
        for (std::uint64_t k = 0; k < power; ++k) p *= eps;
        return ceil_rat(coeff / p) + BigInt(offset);
    };
    return kind == ModulusKind::rate_of_convergence
               ? ModulusFn::rate_of_convergence(name, rule)
               : ModulusFn::cauchy_modulus(name, rule);
}

ModulusFn claimed_theta_modulus(const TomlTable& t, const std::string& field) {
    std::string form = as_string(require(t, field, "form"), field + ".form");
    if (form != "poly")
        field_fail(field + ".form", t.line, "unsupported form '" + form + "' (expected poly)");
    BigRat coeff = t.find("coeff") ? as_exact(*t.find("coeff"), field + ".coeff") : BigRat(1);
    std::uint64_t power = t.find("power") ? as_u64(*t.find("power"), field + ".power") : 1;
    if (coeff <= 0) field_fail(field + ".coeff", t.line, "coefficient must be > 0");
    auto rule = [coeff, power](const BigInt& n) {
        BigRat p(1);
        for (std::uint64_t k = 0; k < power; ++k) p *= BigRat(n);
        return ceil_rat(coeff * p);
    };
    return ModulusFn::rate_of_divergence("claimed.theta", rule);
}

Schedule build_schedule(const TomlTable& root) {
    const TomlTable* st = root.sub("schedule");
    if (!st) throw ConfigError("missing [schedule] table", "schedule");
    std::string kind = as_string(require(*st, "schedule", "kind"), "schedule.kind");
    Schedule s = [&]() {
        if (kind == "harmonic") return Schedule::harmonic();
        if (kind == "shifted_harmonic") return Schedule::shifted_harmonic();
        if (kind == "inverse_sqrt") return Schedule::inverse_sqrt();
        if (kind == "constant") {
            const TomlValue* c = st->find("c");
            if (!c) field_fail("schedule.c", st->line, "constant schedule needs c");
            BigRat cv = as_exact(*c, "schedule.c");
            if (cv < 0 || cv > 1) field_fail("schedule.c", c->line, "c must lie in [0,1]");
            return Schedule::constant(cv);
        }
        field_fail("schedule.kind", st->line,
                   "unknown schedule kind '" + kind +
                       "' (expected harmonic|shifted_harmonic|inverse_sqrt|constant)");
    }();
    if (const TomlTable* claim = st->sub("claim_alpha"))
        s = s.with_alpha(claimed_eps_modulus(*claim, "schedule.claim_alpha",
                                             ModulusKind::rate_of_convergence, "claimed.alpha"));
    if (const TomlTable* claim = st->sub("claim_beta"))
        s = s.with_beta(claimed_eps_modulus(*claim, "schedule.claim_beta",
                                            ModulusKind::cauchy_modulus, "claimed.beta"));
    if (const TomlTable* claim = st->sub("claim_theta"))
        s = s.with_theta(claimed_theta_modulus(*claim, "schedule.claim_theta"));
    return s;
}

NonexpansiveOp build_operator(const TomlTable& t, const std::string& field);

NonexpansiveOp build_operator_kind(const TomlTable& t, const std::string& field) {
    std::string kind = as_string(require(t, field, "kind"), field + ".kind");
    Norm norm = Norm::euclidean;
    if (const TomlValue* nv = t.find("norm")) {
        std::string ns = as_string(*nv, field + ".norm");
        if (ns == "euclidean")
            norm = Norm::euclidean;
        else if (ns == "max")
            norm = Norm::max;
        else if (ns == "sum")
            norm = Norm::sum;
        else
            field_fail(field + ".norm", nv->line, "unknown norm '" + ns + "'");
    }
    if (kind == "identity") {
        std::uint64_t dim = as_u64(require(t, field, "dim"), field + ".dim");
        return NonexpansiveOp::identity(dim, norm);
    }
    if (kind == "ball_projection") {
        Vec center = as_vector(require(t, field, "center"), field + ".center");
        double r = as_number(require(t, field, "ball_radius"), field + ".ball_radius");
        if (norm != Norm::euclidean)
            field_fail(field + ".norm", t.line, "projections are Euclidean-only");
        return NonexpansiveOp::ball_projection(std::move(center), r);
    }
    if (kind == "box_projection") {
        Vec lo = as_vector(require(t, field, "lo"), field + ".lo");
        Vec hi = as_vector(require(t, field, "hi"), field + ".hi");
        if (norm != Norm::euclidean)
            field_fail(field + ".norm", t.line, "projections are Euclidean-only");
        return NonexpansiveOp::box_projection(std::move(lo), std::move(hi));
    }
    if (kind == "halfspace_projection") {
        Vec a = as_vector(require(t, field, "a"), field + ".a");
        double b = as_number(require(t, field, "b"), field + ".b");
        if (norm != Norm::euclidean)
            field_fail(field + ".norm", t.line, "projections are Euclidean-only");
        return NonexpansiveOp::halfspace_projection(std::move(a), b);
    }
    if (kind == "rotation") {
        std::uint64_t dim = as_u64(require(t, field, "dim"), field + ".dim");
        const TomlValue& pv = require(t, field, "planes");
        if (pv.kind != TomlValue::Kind::array)
            field_fail(field + ".planes", pv.line, "expected an array of [i, j, angle] triples");
        std::vector<RotationPlane> planes;
        for (std::size_t k = 0; k < pv.items.size(); ++k) {
            const std::string pf = field + ".planes[" + std::to_string(k) + "]";
            Vec triple = as_vector(pv.items[k], pf);
            if (triple.size() != 3) field_fail(pf, pv.items[k].line, "expected [i, j, angle]");
            double di = triple[0], dj = triple[1];
            if (di < 1 || dj < 1 || di != std::floor(di) || dj != std::floor(dj))
                field_fail(pf, pv.items[k].line, "plane indices are 1-based integers");
            planes.push_back({static_cast<std::size_t>(di) - 1,
                              static_cast<std::size_t>(dj) - 1, triple[2]});
        }
        return NonexpansiveOp::rotation(dim, std::move(planes), norm);
    }
    if (kind == "affine") {
        const TomlValue& mv = require(t, field, "matrix");
        if (mv.kind != TomlValue::Kind::array)
            field_fail(field + ".matrix", mv.line, "expected an array of rows");
        std::size_t dim = mv.items.size();
        std::vector<double> a;
        a.reserve(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            Vec row = as_vector(mv.items[r], field + ".matrix[" + std::to_string(r) + "]");
            if (row.size() != dim)
                field_fail(field + ".matrix", mv.items[r].line, "matrix must be square");
            a.insert(a.end(), row.begin(), row.end());
        }
        Vec offset(dim, 0.0);
        if (const TomlValue* ov = t.find("offset")) offset = as_vector(*ov, field + ".offset");
        return NonexpansiveOp::averaged_affine(dim, std::move(a), std::move(offset), norm);
    }
    if (kind == "composition") {
        std::vector<std::pair<unsigned long, const TomlTable*>> staged;
        for (const auto& [name, sub] : t.subs) {
            if (name.rfind("stage", 0) != 0)
                field_fail(field + "." + name, sub.line,
                           "composition sub-tables must be named stageN");
            try {
                staged.emplace_back(std::stoul(name.substr(5)), &sub);
            } catch (const std::exception&) {
                field_fail(field + "." + name, sub.line, "bad stage number");
            }
        }
        if (staged.empty()) field_fail(field, t.line, "composition needs stage1..stageN tables");
        std::sort(staged.begin(), staged.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<NonexpansiveOp> stages;
        for (const auto& [num, sub] : staged)
            stages.push_back(build_operator(*sub, field + ".stage" + std::to_string(num)));
        return NonexpansiveOp::composition(std::move(stages));
    }
    field_fail(field + ".kind", t.line, "unknown operator kind '" + kind + "'");
}

NonexpansiveOp build_operator(const TomlTable& t, const std::string& field) {
    NonexpansiveOp op = build_operator_kind(t, field);
    if (const TomlValue* rv = t.find("radius")) {
        double r = as_number(*rv, field + ".radius");
        if (!(r > 0)) field_fail(field + ".radius", rv->line, "invariant radius must be > 0");
        op = op.with_invariant_radius(r);
    }
    return op;
}

// ---- schema validation -----------------------------------------------------
// Misspelled keys must not silently fall back to defaults.

void reject_unknown(const TomlTable& t, const std::string& where,
                    std::initializer_list<const char*> keys,
                    std::initializer_list<const char*> subs) {
    auto allowed = [](const std::string& name, std::initializer_list<const char*> list) {
        for (const char* a : list)
            if (name == a) return true;
        return false;
    };
    for (const auto& [name, v] : t.values)
        if (!allowed(name, keys)) field_fail(where + "." + name, v.line, "unknown key");
    for (const auto& [name, sub] : t.subs)
        if (!allowed(name, subs)) field_fail(where + "." + name, sub.line, "unknown table");
}

void validate_operator_schema_tree(const TomlTable& t, const std::string& where) {
    static constexpr const char* keys[] = {"kind",   "norm", "dim",    "center", "ball_radius",
                                           "lo",     "hi",   "a",      "b",      "planes",
                                           "matrix", "offset", "radius"};
    for (const auto& [name, v] : t.values) {
        bool ok = false;
        for (const char* k : keys) ok = ok || name == k;
        if (!ok) field_fail(where + "." + name, v.line, "unknown key");
    }
    // Sub-tables must be composition stages, checked recursively.
    for (const auto& [name, sub] : t.subs) {
        if (name.rfind("stage", 0) != 0)
            field_fail(where + "." + name, sub.line,
                       "unknown table (only stageN sub-tables are allowed here)");
        validate_operator_schema_tree(sub, where + "." + name);
    }
}

void validate_schema(const TomlTable& root) {
    reject_unknown(root, "config", {},
                   {"schedule", "operator", "run", "bounds", "verify", "output"});
    if (const TomlTable* st = root.sub("schedule")) {
        reject_unknown(*st, "schedule", {"kind", "c"},
                       {"claim_alpha", "claim_beta", "claim_theta"});
        for (const char* claim : {"claim_alpha", "claim_beta"})
            if (const TomlTable* ct = st->sub(claim))
                reject_unknown(*ct, std::string("schedule.") + claim,
                               {"form", "coeff", "power", "offset"}, {});
        if (const TomlTable* ct = st->sub("claim_theta"))
            reject_unknown(*ct, "schedule.claim_theta", {"form", "coeff", "power"}, {});
    }
    if (const TomlTable* ot = root.sub("operator")) validate_operator_schema_tree(*ot, "operator");
    if (const TomlTable* rt = root.sub("run"))
        reject_unknown(*rt, "run", {"iteration", "anchor", "horizon", "eps", "seed", "scalar_cap"},
                       {});
    if (const TomlTable* bt = root.sub("bounds")) reject_unknown(*bt, "bounds", {"M", "d_C", "D"}, {});
    if (const TomlTable* vt = root.sub("verify"))
        reject_unknown(*vt, "verify", {"horizon", "trials", "oracle_seeds", "eps"}, {});
    if (const TomlTable* ot = root.sub("output"))
        reject_unknown(*ot, "output", {"directory", "formats"}, {});
}

} // namespace

ExperimentConfig config_from_string(const std::string& text) {
    TomlTable root = parse_toml(text);
    validate_schema(root);
    ExperimentConfig cfg;
    cfg.raw_text = text;
    cfg.schedule = build_schedule(root);

    if (const TomlTable* ot = root.sub("operator")) cfg.op = build_operator(*ot, "operator");

    if (const TomlTable* rt = root.sub("run")) {
        if (const TomlValue* v = rt->find("iteration")) {
            std::string it = as_string(*v, "run.iteration");
            if (it == "halpern")
                cfg.iteration = IterationKind::halpern;
            else if (it == "km")
                cfg.iteration = IterationKind::km;
            else
                field_fail("run.iteration", v->line, "expected halpern or km");
        }
        if (const TomlValue* v = rt->find("anchor")) cfg.anchor = as_vector(*v, "run.anchor");
        if (const TomlValue* v = rt->find("horizon")) {
            cfg.horizon = as_u64(*v, "run.horizon");
            if (*cfg.horizon < 1) field_fail("run.horizon", v->line, "horizon must be >= 1");
        }
        if (const TomlValue* v = rt->find("eps")) {
            if (v->kind != TomlValue::Kind::array)
                field_fail("run.eps", v->line, "expected an array");
            for (std::size_t i = 0; i < v->items.size(); ++i) {
                const std::string f = "run.eps[" + std::to_string(i) + "]";
                cfg.eps.push_back(as_exact(v->items[i], f));
                cfg.eps_text.push_back(v->items[i].text);
            }
        }
        if (const TomlValue* v = rt->find("seed")) cfg.seed = as_u64(*v, "run.seed");
        if (const TomlValue* v = rt->find("scalar_cap")) {
            cfg.scalar_cap = as_u64(*v, "run.scalar_cap");
            if (cfg.scalar_cap < 1) field_fail("run.scalar_cap", v->line, "cap must be >= 1");
        }
    }

    if (const TomlTable* bt = root.sub("bounds")) {
        if (const TomlValue* v = bt->find("M")) {
            BigRat m = as_exact(*v, "bounds.M");
            BigInt mi = ceil_rat(m);
            if (mi < 1 || BigRat(mi) != m)
                field_fail("bounds.M", v->line, "M must be a positive integer");
            cfg.M = mi;
        }
        if (const TomlValue* v = bt->find("d_C")) {
            cfg.d_C = as_exact(*v, "bounds.d_C");
            if (*cfg.d_C < 0) field_fail("bounds.d_C", v->line, "d_C must be >= 0");
        }
        if (const TomlValue* v = bt->find("D")) {
            BigRat d = as_exact(*v, "bounds.D");
            BigInt di = ceil_rat(d);
            if (di < 1 || BigRat(di) != d)
                field_fail("bounds.D", v->line, "D must be a positive integer");
            cfg.D = di;
        }
    }

    if (const TomlTable* vt = root.sub("verify")) {
        if (const TomlValue* v = vt->find("horizon")) {
            cfg.verify_horizon = as_u64(*v, "verify.horizon");
            if (cfg.verify_horizon < 1) field_fail("verify.horizon", v->line, "horizon must be >= 1");
        }
        if (const TomlValue* v = vt->find("trials")) {
            cfg.verify_trials = as_u64(*v, "verify.trials");
            if (cfg.verify_trials < 1) field_fail("verify.trials", v->line, "trials must be >= 1");
        }
        if (const TomlValue* v = vt->find("oracle_seeds"))
            cfg.oracle_seeds = as_u64(*v, "verify.oracle_seeds");
        if (const TomlValue* v = vt->find("eps")) {
            if (v->kind != TomlValue::Kind::array)
                field_fail("verify.eps", v->line, "expected an array");
            for (std::size_t i = 0; i < v->items.size(); ++i)
                cfg.verify_eps.push_back(
                    as_exact(v->items[i], "verify.eps[" + std::to_string(i) + "]"));
        }
    }

    if (const TomlTable* ot = root.sub("output")) {
        if (const TomlValue* v = ot->find("directory")) cfg.out_dir = as_string(*v, "output.directory");
        if (const TomlValue* v = ot->find("formats")) {
            if (v->kind != TomlValue::Kind::array)
                field_fail("output.formats", v->line, "expected an array of format names");
            cfg.want_json = cfg.want_csv = false;
            for (const auto& item : v->items) {
                std::string f = as_string(item, "output.formats[]");
                if (f == "json")
                    cfg.want_json = true;
                else if (f == "csv")
                    cfg.want_csv = true;
                else
                    field_fail("output.formats", item.line, "unknown format '" + f + "'");
            }
        }
    }

    if (cfg.anchor && cfg.op && cfg.anchor->size() != cfg.op->dim())
        throw ConfigError("anchor dimension " + std::to_string(cfg.anchor->size()) +
                              " does not match operator dimension " + std::to_string(cfg.op->dim()),
                          "run.anchor");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_string(buf.str());
}

std::string config_digest(const std::string& raw_text) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : raw_text) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace halrates
