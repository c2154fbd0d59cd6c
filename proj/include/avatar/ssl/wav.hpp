#pragma once

#include <filesystem>
#include <stdexcept>

#include "avatar/ssl/types.hpp"

namespace avatar::ssl {

enum class WavEncoding
{
    Pcm16,
    Float32,
};

/// Raised on unreadable, unwritable or malformed RIFF/WAVE files.
class WavError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Reads a multi-channel RIFF/WAVE file (16-bit PCM or 32-bit float) into a
/// frame starting at t = 0. Samples are scaled to [-1, 1).
AudioFrame read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const AudioFrame& audio, WavEncoding encoding = WavEncoding::Float32);

}  // namespace avatar::ssl
