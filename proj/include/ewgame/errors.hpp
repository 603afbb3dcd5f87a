#pragma once

#include <stdexcept>
#include <string>

namespace ewgame {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The game has eps1 == eps2 == 0; every strategy profile is an equilibrium.
class DegenerateGame : public Error {
public:
    DegenerateGame() : Error("degenerate game: eps1 == eps2 == 0") {}
};

/// A log-ratio coordinate left the representable band [-1e6, 1e6].
class NonFiniteState : public Error {
public:
    using Error::Error;
};

/// The operation is only defined for a particular sign regime of (eps1, eps2).
class WrongRegime : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidRange : public Error {
public:
    using Error::Error;
};

/// Malformed JSON/CSV input or a record that violates its schema.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace ewgame
