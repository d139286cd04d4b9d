#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace freecat {

// Every failure carries a stable code string so the CLI and the python
// bindings can map it without parsing messages.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct CompositionMismatch : Error {
  explicit CompositionMismatch(const std::string& m) : Error("CompositionMismatch", m) {}
};

struct UnknownGenerator : Error {
  explicit UnknownGenerator(const std::string& m) : Error("UnknownGenerator", m) {}
};

struct MixedConnectives : Error {
  explicit MixedConnectives(const std::string& m) : Error("MixedConnectives", m) {}
};

struct SyntaxError : Error {
  SyntaxError(std::size_t position, const std::string& m)
      : Error("SyntaxError", m + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

struct NonStructuralTerm : Error {
  explicit NonStructuralTerm(const std::string& m) : Error("NonStructuralTerm", m) {}
};

struct WrongTheory : Error {
  explicit WrongTheory(const std::string& m) : Error("WrongTheory", m) {}
};

struct TypeMismatch : Error {
  explicit TypeMismatch(const std::string& m) : Error("TypeMismatch", m) {}
};

struct MissingGeneratorTable : Error {
  explicit MissingGeneratorTable(const std::string& m) : Error("MissingGeneratorTable", m) {}
};

struct ResourceLimit : Error {
  explicit ResourceLimit(const std::string& m) : Error("ResourceLimit", m) {}
};

}  // namespace freecat
