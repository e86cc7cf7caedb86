#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

// Error taxonomy shared by the C++ core, the C API status codes and the
// CLI exit codes.

class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidModel : public std::runtime_error {
public:
    explicit InvalidModel(const std::string& what) : std::runtime_error(what) {}
};

// Raised when some part cluster has no placement candidates on the target
// edge map, so no configuration can be instantiated.
class DetectionInfeasible : public std::runtime_error {
public:
    explicit DetectionInfeasible(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dsm
