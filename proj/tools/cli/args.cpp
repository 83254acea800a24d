#include "cli/args.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace convapprox::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

// Recursive descent over + - * / ^ and parentheses.
class ExprParser {
public:
    ExprParser(const std::string& s, double n) : s_(s), n_(n) {}

    double run() {
        const double v = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }
    bool used_n() const { return used_n_; }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw UsageError("bad expression '" + s_ + "': " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    double sum() {
        double v = product();
        for (;;) {
            if (eat('+'))
                v += product();
            else if (eat('-'))
                v -= product();
            else
                return v;
        }
    }
    double product() {
        double v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/'))
                v /= unary();
            else
                return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    double power() {
        const double base = atom();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }
    double atom() {
        skip();
        if (eat('(')) {
            const double v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == 'n') {
            ++pos_;
            used_n_ = true;
            return n_;
        }
        const char* first = s_.data() + pos_;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc() || ptr == first) fail("expected a number or n");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    const std::string& s_;
    double n_;
    std::size_t pos_ = 0;
    bool used_n_ = false;
};

std::pair<std::string, std::string> key_value(const std::string& item, const std::string& context) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(context + ": expected key=value, got '" + item + "'");
    return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.text_ = trim(text);
    if (e.text_.empty()) throw UsageError("empty expression");
    ExprParser p(e.text_, 1.0);
    p.run();
    e.uses_n_ = p.used_n();
    return e;
}

double Expr::eval(double n) const { return ExprParser(text_, n).run(); }

double parse_real(const std::string& raw) {
    const std::string text = trim(raw);
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw UsageError("not a number: '" + text + "'");
    return v;
}

PsiTemplate PsiTemplate::parse(const std::string& raw) {
    PsiTemplate t;
    t.text = trim(raw);
    const auto colon = t.text.find(':');
    if (colon == std::string::npos) throw UsageError("--psi needs family:params, got '" + t.text + "'");
    const std::string family = t.text.substr(0, colon);
    const std::string params = t.text.substr(colon + 1);
    if (family == "table") {
        t.kind = Kind::Table;
        for (const auto& v : split(params, ',')) t.values.push_back(parse_real(v));
        if (t.values.empty()) throw UsageError("table psi needs at least one value");
        return t;
    }
    if (family != "power" && family != "exp") throw UsageError("unknown psi family '" + family + "'");
    t.kind = family == "power" ? Kind::Power : Kind::Exp;
    for (const auto& item : split(params, ',')) {
        const auto [k, v] = key_value(item, "--psi");
        if (k == "r")
            t.r = Expr::parse(v);
        else if (k == "alpha" && t.kind == Kind::Exp)
            t.alpha = Expr::parse(v);
        else
            throw UsageError("unknown psi parameter '" + k + "' for family " + family);
    }
    if (!t.r) throw UsageError("psi family " + family + " needs r=");
    if (t.kind == Kind::Exp && !t.alpha) throw UsageError("exp psi needs alpha=");
    return t;
}

bool PsiTemplate::uses_n() const { return (r && r->uses_n()) || (alpha && alpha->uses_n()); }

PsiSequence PsiTemplate::instantiate(long n) const {
    const auto nd = static_cast<double>(n);
    switch (kind) {
    case Kind::Power: return PsiSequence::power_law(r->eval(nd));
    case Kind::Exp: return PsiSequence::exp_power(alpha->eval(nd), r->eval(nd));
    case Kind::Table: return PsiSequence::table(values);
    }
    throw UsageError("bad psi template");
}

BetaSequence parse_beta(const std::string& raw) {
    const std::string text = trim(raw);
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--beta needs const:v or list:v1,v2,..., got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (kind == "const") return BetaSequence::constant(parse_real(rest));
    if (kind == "list") {
        std::vector<double> v;
        for (const auto& s : split(rest, ',')) v.push_back(parse_real(s));
        if (v.empty()) throw UsageError("beta list is empty");
        return BetaSequence::list(std::move(v));
    }
    throw UsageError("unknown beta kind '" + kind + "'");
}

std::vector<long> parse_n_list(const std::string& raw) {
    std::set<long> out;
    auto integer = [](const std::string& s) {
        long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw UsageError("not an integer: '" + s + "'");
        return v;
    };
    for (const auto& item : split(trim(raw), ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.insert(integer(item));
            continue;
        }
        const long lo = integer(trim(item.substr(0, dots)));
        const long hi = integer(trim(item.substr(dots + 2)));
        if (hi - lo > 100000) throw UsageError("n range too long: '" + item + "'");
        for (long n = lo; n <= hi; ++n) out.insert(n);
    }
    if (out.empty()) throw UsageError("empty n range");
    if (*out.begin() < 1) throw UsageError("n must be >= 1");
    return {out.begin(), out.end()};
}

std::vector<double> parse_p_list(const std::string& raw) {
    std::set<double> out;
    for (const auto& item : split(trim(raw), ',')) {
        const double p = parse_real(item);
        if (!(p >= 1.0)) throw UsageError("p must be >= 1, got '" + item + "'");
        out.insert(p);
    }
    if (out.empty()) throw UsageError("empty p list");
    return {out.begin(), out.end()};
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

} // namespace convapprox::cli
