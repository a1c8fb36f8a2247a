#pragma once

// Audio input, STFT power spectrogram and patch tiling.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pwgauss {

struct Signal {
    std::vector<double> samples;  // first channel, scaled to [-1, 1]
    unsigned sample_rate = 0;
    unsigned channels = 1;        // channel count of the source file
    std::vector<std::string> warnings;
};

// RIFF/WAVE with PCM16 or float32 data (plain or WAVE_FORMAT_EXTENSIBLE),
// and NIST SPHERE with uncompressed 16-bit PCM. Multichannel input keeps the
// first channel and records a warning. Throws IoError when the file cannot
// be read and FormatError naming the offending chunk or header field
// otherwise.
Signal load_wav(const std::filesystem::path& path);

// Writes mono PCM16; samples are clipped to [-1, 1].
void write_wav_pcm16(const std::filesystem::path& path, std::span<const double> samples, unsigned sample_rate);

enum class Window { hann, hamming, rect };

// Scaling applied to |X_k|^2.
//   none:   raw squared DFT magnitude
//   window: divided by sum_n w[n]^2
//   length: divided by the FFT length
enum class SpectrumScaling { none, window, length };

std::string_view window_name(Window w);
std::optional<Window> parse_window(std::string_view s);
std::string_view scaling_name(SpectrumScaling s);
std::optional<SpectrumScaling> parse_scaling(std::string_view s);

// Periodic window of length n.
std::vector<double> make_window(Window w, std::size_t n);

struct StftConfig {
    double frame_ms = 16.0;
    double hop_ms = 4.0;
    Window window = Window::hann;
    // 0 means FFT length = frame length; otherwise frames are zero padded.
    std::size_t fft_len = 0;
    SpectrumScaling scaling = SpectrumScaling::none;

    std::size_t frame_length(unsigned sample_rate) const;
    std::size_t hop_length(unsigned sample_rate) const;
    std::size_t fft_length(unsigned sample_rate) const;
    // Throws DomainError unless hop <= frame, frame >= 2 samples and
    // fft_len (if set) >= frame length.
    void validate(unsigned sample_rate) const;
};

class PowerSpectrogram {
public:
    PowerSpectrogram() = default;
    PowerSpectrogram(std::size_t n_bins, std::size_t n_frames)
        : n_bins_(n_bins), n_frames_(n_frames), values_(n_bins * n_frames, 0.0) {}

    std::size_t n_bins() const { return n_bins_; }
    std::size_t n_frames() const { return n_frames_; }
    double& at(std::size_t bin, std::size_t frame) { return values_[frame * n_bins_ + bin]; }
    double at(std::size_t bin, std::size_t frame) const { return values_[frame * n_bins_ + bin]; }
    // Frame-major storage.
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

private:
    std::size_t n_bins_ = 0;
    std::size_t n_frames_ = 0;
    std::vector<double> values_;
};

// |STFT|^2 with one-sided bins (fft_len/2 + 1) and
// floor((len - frame)/hop) + 1 frames. Throws DomainError when the signal
// is shorter than one frame.
PowerSpectrogram stft_power(std::span<const double> signal, unsigned sample_rate, const StftConfig& cfg);

struct Patch {
    std::size_t f0 = 0;  // first bin
    std::size_t t0 = 0;  // first frame
    std::vector<double> values;  // bin-major within the patch
};

struct Tiling {
    std::vector<Patch> patches;
    std::size_t dropped_bins = 0;    // trailing bins not covered
    std::size_t dropped_frames = 0;  // trailing frames not covered
};

// Disjoint freq_span x time_span tiles anchored at bin 0, frame 0.
Tiling tile_patches(const PowerSpectrogram& spec, std::size_t freq_span = 3, std::size_t time_span = 20);

}  // namespace pwgauss
