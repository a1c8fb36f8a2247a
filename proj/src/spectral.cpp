#include "pwgauss/spectral.hpp"

#include "pwgauss/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace pwgauss {

namespace {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_wav: cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("load_wav: read failed for " + path.string());
    return data;
}

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

[[noreturn]] void format_fail(const std::filesystem::path& path, const std::string& what) {
    throw FormatError("load_wav: " + path.string() + ": " + what);
}

double pcm16_to_unit(std::int16_t v) { return static_cast<double>(v) / 32768.0; }

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

Signal parse_riff(const Bytes& b, const std::filesystem::path& path) {
    if (b.size() < 12 || std::memcmp(b.data() + 8, "WAVE", 4) != 0) format_fail(path, "RIFF header: form type is not WAVE");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;
    Signal sig;

    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::string id(reinterpret_cast<const char*>(b.data() + pos), 4);
        const std::size_t size = le32(b.data() + pos + 4);
        const std::size_t body = pos + 8;
        const std::size_t avail = std::min(size, b.size() - body);
        if (id == "fmt ") {
            if (avail < 16) format_fail(path, "fmt chunk: shorter than 16 bytes");
            const std::uint8_t* f = b.data() + body;
            format = le16(f);
            channels = le16(f + 2);
            rate = le32(f + 4);
            block_align = le16(f + 12);
            bits = le16(f + 14);
            if (format == kFormatExtensible) {
                if (avail < 26) format_fail(path, "fmt chunk: WAVE_FORMAT_EXTENSIBLE without subformat");
                format = le16(f + 24);
            }
            have_fmt = true;
        } else if (id == "data") {
            data = b.data() + body;
            data_size = avail;
            if (avail < size) sig.warnings.push_back("data chunk truncated: declared " + std::to_string(size) +
                                                     " bytes, file holds " + std::to_string(avail));
        }
        pos = body + size + (size & 1U);
    }

    if (!have_fmt) format_fail(path, "fmt chunk missing");
    if (!data) format_fail(path, "data chunk missing");
    if (channels == 0) format_fail(path, "fmt chunk: zero channels");
    if (rate == 0) format_fail(path, "fmt chunk: zero sample rate");
    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool f32 = format == kFormatFloat && bits == 32;
    if (!pcm16 && !f32) {
        format_fail(path, "fmt chunk: unsupported encoding (format tag " + std::to_string(format) + ", " +
                              std::to_string(bits) + " bits); only PCM16 and float32 are read");
    }
    const std::size_t bytes_per_sample = bits / 8;
    if (block_align != channels * bytes_per_sample) format_fail(path, "fmt chunk: block align does not match channels");
    const std::size_t frames = data_size / block_align;
    if (frames == 0) format_fail(path, "data chunk: no samples");

    sig.sample_rate = rate;
    sig.channels = channels;
    if (channels > 1) sig.warnings.push_back(std::to_string(channels) + " channels, first channel used");
    sig.samples.resize(frames);
    bool clipped = false;
    for (std::size_t i = 0; i < frames; ++i) {
        const std::uint8_t* s = data + i * block_align;
        if (pcm16) {
            sig.samples[i] = pcm16_to_unit(static_cast<std::int16_t>(le16(s)));
        } else {
            const std::uint32_t u = le32(s);
            float v;
            std::memcpy(&v, &u, sizeof v);
            double d = v;
            if (!std::isfinite(d)) format_fail(path, "data chunk: non-finite float sample");
            if (std::fabs(d) > 1.0) {
                clipped = true;
                d = std::clamp(d, -1.0, 1.0);
            }
            sig.samples[i] = d;
        }
    }
    if (clipped) sig.warnings.push_back("float samples outside [-1, 1] were clipped");
    return sig;
}

// NIST SPHERE: "NIST_1A\n   1024\n" followed by "key -type value" lines up
// to "end_head", then raw samples at the header offset.
Signal parse_sphere(const Bytes& b, const std::filesystem::path& path) {
    const std::size_t probe = std::min<std::size_t>(b.size(), 64);
    std::istringstream first(std::string(reinterpret_cast<const char*>(b.data()), probe));
    std::string magic;
    std::size_t header_size = 0;
    first >> magic >> header_size;
    if (!first || header_size < 16 || header_size > b.size()) format_fail(path, "SPHERE header: bad header size");

    std::istringstream head(std::string(reinterpret_cast<const char*>(b.data()), header_size));
    std::string line;
    std::getline(head, line);
    std::getline(head, line);
    std::map<std::string, std::string> fields;
    bool ended = false;
    while (std::getline(head, line)) {
        std::istringstream ls(line);
        std::string key, type, value;
        ls >> key;
        if (key == "end_head") {
            ended = true;
            break;
        }
        ls >> type;
        std::getline(ls >> std::ws, value);
        if (!key.empty()) fields[key] = value;
    }
    if (!ended) format_fail(path, "SPHERE header: end_head missing");

    auto int_field = [&](const char* key, long fallback) -> long {
        const auto it = fields.find(key);
        if (it == fields.end()) {
            if (fallback >= 0) return fallback;
            format_fail(path, std::string("SPHERE header: field ") + key + " missing");
        }
        try {
            return std::stol(it->second);
        } catch (const std::exception&) {
            format_fail(path, std::string("SPHERE header: field ") + key + " is not an integer");
        }
    };
    const long channels = int_field("channel_count", 1);
    const long n_bytes = int_field("sample_n_bytes", 2);
    const long rate = int_field("sample_rate", -1);
    const std::string coding = fields.count("sample_coding") ? fields["sample_coding"] : "pcm";
    const std::string order = fields.count("sample_byte_format") ? fields["sample_byte_format"] : "01";
    if (coding != "pcm") format_fail(path, "SPHERE header: sample_coding '" + coding + "' unsupported");
    if (n_bytes != 2) format_fail(path, "SPHERE header: sample_n_bytes must be 2");
    if (order != "01" && order != "10") format_fail(path, "SPHERE header: sample_byte_format '" + order + "'");
    if (channels < 1 || rate < 1) format_fail(path, "SPHERE header: bad channel_count or sample_rate");

    const std::size_t block = static_cast<std::size_t>(channels) * 2;
    std::size_t frames = (b.size() - header_size) / block;
    if (fields.count("sample_count")) {
        frames = std::min(frames, static_cast<std::size_t>(int_field("sample_count", -1)));
    }
    if (frames == 0) format_fail(path, "SPHERE data: no samples");

    Signal sig;
    sig.sample_rate = static_cast<unsigned>(rate);
    sig.channels = static_cast<unsigned>(channels);
    if (channels > 1) sig.warnings.push_back(std::to_string(channels) + " channels, first channel used");
    sig.samples.resize(frames);
    const bool big_endian = order == "10";
    for (std::size_t i = 0; i < frames; ++i) {
        const std::uint8_t* s = b.data() + header_size + i * block;
        const std::uint16_t u = big_endian ? static_cast<std::uint16_t>((s[0] << 8) | s[1]) : le16(s);
        sig.samples[i] = pcm16_to_unit(static_cast<std::int16_t>(u));
    }
    return sig;
}

void put16(std::ostream& os, std::uint16_t v) {
    const char c[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
    os.write(c, 2);
}
void put32(std::ostream& os, std::uint32_t v) {
    const char c[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>(v >> 24)};
    os.write(c, 4);
}

// FFTW's planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

Signal load_wav(const std::filesystem::path& path) {
    const Bytes b = read_file(path);
    if (b.empty()) format_fail(path, "empty file");
    if (b.size() >= 7 && std::memcmp(b.data(), "NIST_1A", 7) == 0) return parse_sphere(b, path);
    if (b.size() >= 4 && std::memcmp(b.data(), "RIFF", 4) == 0) return parse_riff(b, path);
    format_fail(path, "header: neither RIFF/WAVE nor NIST SPHERE");
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples, unsigned sample_rate) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("write_wav_pcm16: cannot open " + path.string());
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    os.write("RIFF", 4);
    put32(os, 36 + data_bytes);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    put32(os, 16);
    put16(os, kFormatPcm);
    put16(os, 1);
    put32(os, sample_rate);
    put32(os, sample_rate * 2);
    put16(os, 2);
    put16(os, 16);
    os.write("data", 4);
    put32(os, data_bytes);
    for (double s : samples) {
        const double q = std::round(std::clamp(s, -1.0, 1.0) * 32767.0);
        put16(os, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    if (!os) throw IoError("write_wav_pcm16: write failed for " + path.string());
}

std::string_view window_name(Window w) {
    switch (w) {
        case Window::hann: return "hann";
        case Window::hamming: return "hamming";
        case Window::rect: return "rect";
    }
    return "?";
}

std::optional<Window> parse_window(std::string_view s) {
    for (Window w : {Window::hann, Window::hamming, Window::rect}) {
        if (window_name(w) == s) return w;
    }
    return std::nullopt;
}

std::string_view scaling_name(SpectrumScaling s) {
    switch (s) {
        case SpectrumScaling::none: return "none";
        case SpectrumScaling::window: return "window";
        case SpectrumScaling::length: return "length";
    }
    return "?";
}

std::optional<SpectrumScaling> parse_scaling(std::string_view s) {
    for (SpectrumScaling v : {SpectrumScaling::none, SpectrumScaling::window, SpectrumScaling::length}) {
        if (scaling_name(v) == s) return v;
    }
    return std::nullopt;
}

std::vector<double> make_window(Window w, std::size_t n) {
    std::vector<double> out(n, 1.0);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(step * static_cast<double>(i));
        if (w == Window::hann) out[i] = 0.5 - 0.5 * c;
        if (w == Window::hamming) out[i] = 0.54 - 0.46 * c;
    }
    return out;
}

std::size_t StftConfig::frame_length(unsigned sample_rate) const {
    return static_cast<std::size_t>(std::llround(frame_ms * sample_rate / 1000.0));
}

std::size_t StftConfig::hop_length(unsigned sample_rate) const {
    return static_cast<std::size_t>(std::llround(hop_ms * sample_rate / 1000.0));
}

std::size_t StftConfig::fft_length(unsigned sample_rate) const {
    return fft_len == 0 ? frame_length(sample_rate) : fft_len;
}

void StftConfig::validate(unsigned sample_rate) const {
    if (sample_rate == 0) detail::domain_fail("StftConfig", "sample rate must be positive");
    if (!(frame_ms > 0.0) || !(hop_ms > 0.0)) detail::domain_fail("StftConfig", "frame_ms and hop_ms must be > 0");
    if (hop_ms > frame_ms) detail::domain_fail("StftConfig", "hop_ms must not exceed frame_ms");
    if (frame_length(sample_rate) < 2) detail::domain_fail("StftConfig", "frame shorter than 2 samples");
    if (hop_length(sample_rate) < 1) detail::domain_fail("StftConfig", "hop shorter than 1 sample");
    if (fft_len != 0 && fft_len < frame_length(sample_rate)) {
        detail::domain_fail("StftConfig", "fft_len shorter than the frame");
    }
}

PowerSpectrogram stft_power(std::span<const double> signal, unsigned sample_rate, const StftConfig& cfg) {
    cfg.validate(sample_rate);
    const std::size_t frame = cfg.frame_length(sample_rate);
    const std::size_t hop = cfg.hop_length(sample_rate);
    const std::size_t nfft = cfg.fft_length(sample_rate);
    if (signal.size() < frame) {
        detail::domain_fail("stft_power", "signal of " + std::to_string(signal.size()) + " samples is shorter than a " +
                                              std::to_string(frame) + "-sample frame");
    }
    const std::size_t n_frames = (signal.size() - frame) / hop + 1;
    const std::size_t n_bins = nfft / 2 + 1;
    const std::vector<double> win = make_window(cfg.window, frame);

    double scale = 1.0;
    if (cfg.scaling == SpectrumScaling::window) {
        double s = 0.0;
        for (double w : win) s += w * w;
        scale = 1.0 / s;
    } else if (cfg.scaling == SpectrumScaling::length) {
        scale = 1.0 / static_cast<double>(nfft);
    }

    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * nfft)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_bins)));
    if (!in || !out) throw std::bad_alloc();
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.get(), out.get(), FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("stft_power: FFTW planning failed");

    PowerSpectrogram spec(n_bins, n_frames);
    double* buf = in.get();
    for (std::size_t t = 0; t < n_frames; ++t) {
        const double* x = signal.data() + t * hop;
        for (std::size_t i = 0; i < frame; ++i) buf[i] = x[i] * win[i];
        std::fill(buf + frame, buf + nfft, 0.0);
        fftw_execute(plan);
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double re = out.get()[k][0];
            const double im = out.get()[k][1];
            spec.at(k, t) = (re * re + im * im) * scale;
        }
    }
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return spec;
}

Tiling tile_patches(const PowerSpectrogram& spec, std::size_t freq_span, std::size_t time_span) {
    if (freq_span == 0 || time_span == 0) detail::domain_fail("tile_patches", "patch spans must be positive");
    if (spec.n_bins() < freq_span || spec.n_frames() < time_span) {
        detail::domain_fail("tile_patches", "spectrogram of " + std::to_string(spec.n_bins()) + "x" +
                                                std::to_string(spec.n_frames()) + " is smaller than one patch");
    }
    const std::size_t nf = spec.n_bins() / freq_span;
    const std::size_t nt = spec.n_frames() / time_span;
    Tiling out;
    out.dropped_bins = spec.n_bins() - nf * freq_span;
    out.dropped_frames = spec.n_frames() - nt * time_span;
    out.patches.reserve(nf * nt);
    // Time-major patch order: all bands of the first time block come first.
    for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < nf; ++i) {
            Patch p;
            p.f0 = i * freq_span;
            p.t0 = j * time_span;
            p.values.reserve(freq_span * time_span);
            for (std::size_t f = p.f0; f < p.f0 + freq_span; ++f) {
                for (std::size_t t = p.t0; t < p.t0 + time_span; ++t) p.values.push_back(spec.at(f, t));
            }
            out.patches.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace pwgauss
