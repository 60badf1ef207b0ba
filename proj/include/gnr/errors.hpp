#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gnr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text.  offset is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the real domain of a subexpression (ln of a negative, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression, std::size_t offset)
        : Error(message + " in '" + subexpression + "' (offset " + std::to_string(offset) + ")"),
          subexpression_(std::move(subexpression)),
          offset_(offset) {}
    const std::string& subexpression() const { return subexpression_; }
    std::size_t offset() const { return offset_; }

private:
    std::string subexpression_;
    std::size_t offset_;
};

/// No Frenet frame exists (curvature below threshold) and the policy gives none.
class DegenerateFrame : public Error {
public:
    DegenerateFrame(const std::string& message, double s) : Error(message), s_(s) {}
    double s() const { return s_; }

private:
    double s_;
};

/// Arclength formulas were requested on a curve whose speed is not 1.
class NonUnitSpeed : public Error {
public:
    NonUnitSpeed(const std::string& message, double speed) : Error(message), speed_(speed) {}
    double speed() const { return speed_; }

private:
    double speed_;
};

/// The surface normal vanishes (f = g = 0).
class SingularPoint : public Error {
public:
    SingularPoint(double s, double u, double f, double g)
        : Error("singular point at s=" + std::to_string(s) + ", u=" + std::to_string(u) +
                " (f=" + std::to_string(f) + ", g=" + std::to_string(g) + ")"),
          s_(s), u_(u), f_(f), g_(g) {}
    double s() const { return s_; }
    double u() const { return u_; }
    double f() const { return f_; }
    double g() const { return g_; }

private:
    double s_, u_, f_, g_;
};

/// The ruling derivative vanishes, so striction and the ruled frame are undefined.
class CylindricalRuling : public Error {
public:
    CylindricalRuling(const std::string& message, double s) : Error(message), s_(s) {}
    double s() const { return s_; }

private:
    double s_;
};

class NotDevelopable : public Error {
public:
    using Error::Error;
};

/// g vanishes on a developable surface: the point lies on the fold curve.
class SingularOrFoldPoint : public Error {
public:
    using Error::Error;
};

/// Invalid scene description or configuration value.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gnr
