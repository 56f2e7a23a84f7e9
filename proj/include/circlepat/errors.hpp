#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace circlepat {

// Base of every error raised by the library. Callers that only care about
// "something went wrong mathematically" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TriangleInequalityViolation : public Error {
public:
    using Error::Error;
};

// Radius outside (0, kMaxRadius] or non-finite input.
class RangeError : public Error {
public:
    using Error::Error;
};

class NotATriangulation : public Error {
public:
    using Error::Error;
};

class WeightOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidSurface : public Error {
public:
    using Error::Error;
};

// A checker gate refused to run the solver.
class ConditionNotMet : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

class DegenerationDetected : public Error {
public:
    DegenerationDetected(const std::string& what, std::vector<int> vertices)
        : Error(what), vertices_(std::move(vertices)) {}
    // Vertex indices whose radius hit the floor or the cap.
    const std::vector<int>& vertices() const { return vertices_; }

private:
    std::vector<int> vertices_;
};

class ResidualTooLarge : public Error {
public:
    using Error::Error;
};

class RegionTooSmall : public Error {
public:
    using Error::Error;
};

class GluingNotTriangular : public Error {
public:
    using Error::Error;
};

// Malformed input file; line is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class IOError : public Error {
public:
    using Error::Error;
};

}  // namespace circlepat
