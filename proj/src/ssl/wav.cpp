#include "avatar/ssl/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace avatar::ssl {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class Reader
{
public:
    explicit Reader(std::vector<unsigned char> bytes) : mBytes(std::move(bytes)) {}

    [[nodiscard]] std::size_t remaining() const { return mBytes.size() - mPos; }
    [[nodiscard]] std::size_t position() const { return mPos; }

    void require(std::size_t n) const
    {
        if (remaining() < n)
        {
            throw WavError("truncated WAV file");
        }
    }

    std::string tag()
    {
        require(4);
        std::string t(reinterpret_cast<const char*>(&mBytes[mPos]), 4);
        mPos += 4;
        return t;
    }

    template <typename T>
    T little()
    {
        require(sizeof(T));
        std::make_unsigned_t<T> value = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b)
        {
            value |= static_cast<std::make_unsigned_t<T>>(mBytes[mPos + b]) << (8 * b);
        }
        mPos += sizeof(T);
        return static_cast<T>(value);
    }

    void skip(std::size_t n)
    {
        require(n);
        mPos += n;
    }

private:
    std::vector<unsigned char> mBytes;
    std::size_t mPos = 0;
};

template <typename T>
void put_little(std::vector<unsigned char>& out, T value)
{
    auto bits = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b)
    {
        out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xFFu));
    }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

AudioFrame read_wav(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw WavError("cannot open " + path.string());
    }
    Reader r(std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {}));

    if (r.tag() != "RIFF")
    {
        throw WavError("not a RIFF file");
    }
    r.little<std::uint32_t>();
    if (r.tag() != "WAVE")
    {
        throw WavError("not a WAVE file");
    }

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    bool have_format = false;
    while (r.remaining() >= 8)
    {
        const std::string id = r.tag();
        const auto size = r.little<std::uint32_t>();
        if (id == "fmt ")
        {
            r.require(size);
            const std::size_t end = r.position() + size;
            format = r.little<std::uint16_t>();
            channels = r.little<std::uint16_t>();
            rate = r.little<std::uint32_t>();
            r.little<std::uint32_t>();
            r.little<std::uint16_t>();
            bits = r.little<std::uint16_t>();
            if (format == kFormatExtensible && size >= 40)
            {
                r.skip(8);
                format = r.little<std::uint16_t>();
            }
            r.skip(end - r.position());
            have_format = true;
        }
        else if (id == "data")
        {
            if (!have_format)
            {
                throw WavError("data chunk precedes fmt chunk");
            }
            const bool pcm16 = format == kFormatPcm && bits == 16;
            const bool float32 = format == kFormatFloat && bits == 32;
            if (!pcm16 && !float32)
            {
                throw WavError("unsupported WAV encoding (need 16-bit PCM or 32-bit float)");
            }
            if (channels == 0 || rate == 0)
            {
                throw WavError("WAV header declares zero channels or sample rate");
            }
            const std::size_t bytes_per_frame = static_cast<std::size_t>(channels) * (bits / 8);
            const std::size_t frames = std::min<std::size_t>(size, r.remaining()) / bytes_per_frame;

            AudioFrame audio;
            audio.sample_rate = rate;
            audio.channels.assign(channels, std::vector<double>(frames));
            for (std::size_t n = 0; n < frames; ++n)
            {
                for (std::size_t c = 0; c < channels; ++c)
                {
                    if (pcm16)
                    {
                        audio.channels[c][n] = r.little<std::int16_t>() / 32768.0;
                    }
                    else
                    {
                        audio.channels[c][n] = std::bit_cast<float>(r.little<std::uint32_t>());
                    }
                }
            }
            return audio;
        }
        else
        {
            r.skip(std::min<std::size_t>(size + (size & 1u), r.remaining()));
        }
    }
    throw WavError("WAV file has no data chunk");
}

void write_wav(const std::filesystem::path& path, const AudioFrame& audio, WavEncoding encoding)
{
    if (audio.channels.empty())
    {
        throw WavError("cannot write a WAV file without channels");
    }
    const auto channels = static_cast<std::uint16_t>(audio.channels.size());
    const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
    const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
    const std::size_t frames = audio.length();
    const auto data_bytes = static_cast<std::uint32_t>(frames * channels * (bits / 8));

    std::vector<unsigned char> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_little<std::uint32_t>(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_little<std::uint32_t>(out, 16);
    put_little<std::uint16_t>(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
    put_little<std::uint16_t>(out, channels);
    put_little<std::uint32_t>(out, rate);
    put_little<std::uint32_t>(out, rate * channels * (bits / 8));
    put_little<std::uint16_t>(out, static_cast<std::uint16_t>(channels * (bits / 8)));
    put_little<std::uint16_t>(out, bits);
    put_tag(out, "data");
    put_little<std::uint32_t>(out, data_bytes);
    for (std::size_t n = 0; n < frames; ++n)
    {
        for (const auto& channel : audio.channels)
        {
            if (encoding == WavEncoding::Pcm16)
            {
                const double scaled = std::clamp(std::round(channel[n] * 32768.0), -32768.0, 32767.0);
                put_little<std::int16_t>(out, static_cast<std::int16_t>(scaled));
            }
            else
            {
                put_little<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(channel[n])));
            }
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
    {
        throw WavError("cannot open " + path.string() + " for writing");
    }
    file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!file)
    {
        throw WavError("failed writing " + path.string());
    }
}

}  // namespace avatar::ssl
