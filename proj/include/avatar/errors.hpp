#pragma once

#include <stdexcept>
#include <string>

namespace avatar {

/// Base of every domain error raised by the library. Precondition violations
/// on plain arguments use std::invalid_argument instead.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Resultant of a circular mean is too short to define a direction.
class DegenerateMean : public Error
{
public:
    using Error::Error;
};

/// Cross-correlation has no unique peak above the noise floor.
class NoPeak : public Error
{
public:
    using Error::Error;
};

class NoVoiceActivity : public Error
{
public:
    using Error::Error;
};

/// Robot state with more than one control flag raised, or a flag/action mismatch.
class InvalidState : public Error
{
public:
    using Error::Error;
};

class InvalidScenario : public Error
{
public:
    using Error::Error;
};

/// Trace and scenario do not belong together.
class TraceMismatch : public Error
{
public:
    using Error::Error;
};

}  // namespace avatar
