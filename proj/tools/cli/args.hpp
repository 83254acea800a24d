#pragma once

#include "convapprox/series_kernels.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace convapprox::cli {

/// Malformed command line or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written; maps to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arithmetic expression in the variable n, e.g. "n+1", "n^2", "2*n", "5".
class Expr {
public:
    static Expr parse(const std::string& text);
    double eval(double n) const;
    bool uses_n() const noexcept { return uses_n_; }
    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
    bool uses_n_ = false;
};

/// A psi family whose parameters may depend on n.
struct PsiTemplate {
    enum class Kind { Power, Exp, Table } kind = Kind::Power;
    std::optional<Expr> r;
    std::optional<Expr> alpha;
    std::vector<double> values;
    std::string text;

    static PsiTemplate parse(const std::string& text);
    bool uses_n() const;
    PsiSequence instantiate(long n) const;
};

BetaSequence parse_beta(const std::string& text);

/// "2..8", "2,3,4,6,8", "1..3,7"; ascending and without duplicates.
std::vector<long> parse_n_list(const std::string& text);

/// "1,2,inf"; ascending with infinity last, without duplicates.
std::vector<double> parse_p_list(const std::string& text);

double parse_real(const std::string& text);

/// Reads `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path);

} // namespace convapprox::cli
