#include "songprep/midi.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>

#include "songprep/errors.hpp"
#include "songprep/vocab.hpp"

namespace songprep {

namespace {

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return offset_; }
    std::size_t remaining() const { return bytes_.size() - offset_; }

    std::uint8_t u8() {
        need(1);
        return bytes_[offset_++];
    }

    std::uint8_t peek() const {
        if (offset_ >= bytes_.size()) throw ParseError("unexpected end of file", offset_);
        return bytes_[offset_];
    }

    std::uint16_t u16() {
        need(2);
        std::uint16_t v = (std::uint16_t(bytes_[offset_]) << 8) | bytes_[offset_ + 1];
        offset_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[offset_ + i];
        offset_ += 4;
        return v;
    }

    // Variable-length quantity, at most 4 bytes.
    std::uint32_t vlq() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            const std::uint8_t b = u8();
            v = (v << 7) | (b & 0x7f);
            if (!(b & 0x80)) return v;
        }
        throw ParseError("variable-length quantity longer than 4 bytes", offset_);
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        need(n);
        auto s = bytes_.subspan(offset_, n);
        offset_ += n;
        return s;
    }

    void skip(std::size_t n) {
        need(n);
        offset_ += n;
    }

    void seek(std::size_t abs) {
        if (abs > bytes_.size()) throw ParseError("chunk length past end of file", offset_);
        offset_ = abs;
    }

private:
    void need(std::size_t n) {
        if (remaining() < n) throw ParseError("unexpected end of file", offset_);
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t offset_ = 0;
};

std::int64_t rescale(std::int64_t tick, int division) {
    // to 480 ticks per quarter, round to nearest
    return (tick * kTicksPerQuarter + division / 2) / division;
}

struct OpenNote {
    std::int64_t tick;
    int velocity;
};

}  // namespace

int RawSong::melody_track() const {
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (!tracks[i].lyrics.empty() && !tracks[i].notes.empty()) return static_cast<int>(i);
    }
    return -1;
}

bool RawSong::has_lyrics() const {
    for (const auto& t : tracks) {
        if (!t.lyrics.empty()) return true;
    }
    return false;
}

RawSong parse_midi(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);

    auto magic = in.take(4);
    if (!std::equal(magic.begin(), magic.end(), "MThd")) {
        throw ParseError("not a Standard MIDI File (missing MThd)", 0);
    }
    const std::uint32_t header_len = in.u32();
    if (header_len < 6) throw ParseError("MThd chunk too short", in.offset());
    const std::uint16_t format = in.u16();
    const std::uint16_t ntrks = in.u16();
    const std::uint16_t division_raw = in.u16();
    in.skip(header_len - 6);

    if (format != 0 && format != 1) {
        throw ParseError("unsupported SMF format " + std::to_string(format), in.offset());
    }
    if (division_raw & 0x8000) {
        throw ParseError("SMPTE time division is not supported", in.offset());
    }
    const int division = division_raw;
    if (division == 0) throw ParseError("zero ticks-per-quarter division", in.offset());

    RawSong song;
    song.tracks.resize(ntrks);

    for (int trk = 0; trk < ntrks; ++trk) {
        auto chunk_magic = in.take(4);
        if (!std::equal(chunk_magic.begin(), chunk_magic.end(), "MTrk")) {
            throw ParseError("expected MTrk chunk", in.offset() - 4);
        }
        const std::uint32_t track_len = in.u32();
        const std::size_t track_end = in.offset() + track_len;
        if (track_end > bytes.size()) {
            throw ParseError("track chunk length past end of file", in.offset());
        }

        RawTrack& track = song.tracks[trk];
        // open note-ons per (channel, pitch), FIFO pairing
        std::map<int, std::deque<OpenNote>> open;
        std::int64_t tick = 0;
        std::uint8_t running_status = 0;
        bool ended = false;

        while (!ended && in.offset() < track_end) {
            tick += in.vlq();
            std::uint8_t status = in.peek();
            if (status & 0x80) {
                in.skip(1);
                if (status < 0xf0) running_status = status;
            } else {
                if (!(running_status & 0x80)) {
                    throw ParseError("data byte without running status", in.offset());
                }
                status = running_status;
            }

            if (status == 0xff) {
                const std::uint8_t type = in.u8();
                const std::uint32_t len = in.vlq();
                auto data = in.take(len);
                switch (type) {
                    case 0x01:  // text, used as lyrics by karaoke files
                    case 0x05:  // lyric
                        track.lyrics.push_back(
                            RawLyric{tick, std::string(data.begin(), data.end())});
                        break;
                    case 0x51: {
                        if (len != 3) throw ParseError("tempo meta event needs 3 bytes", in.offset());
                        const std::uint32_t usec =
                            (std::uint32_t(data[0]) << 16) | (std::uint32_t(data[1]) << 8) | data[2];
                        if (usec == 0) throw ParseError("zero tempo", in.offset());
                        song.tempos.push_back(TempoEvent{tick, 60000000.0 / usec, usec});
                        break;
                    }
                    case 0x58: {
                        if (len < 2) throw ParseError("time signature needs 2+ bytes", in.offset());
                        if (data[1] > 15) {
                            throw ParseError("implausible time-signature denominator", in.offset());
                        }
                        song.time_signatures.push_back(
                            TimeSignatureEvent{tick, data[0], 1 << data[1]});
                        break;
                    }
                    case 0x2f:
                        ended = true;
                        break;
                    default:
                        break;
                }
            } else if (status == 0xf0 || status == 0xf7) {
                in.skip(in.vlq());
            } else {
                const int kind = status & 0xf0;
                const int channel = status & 0x0f;
                switch (kind) {
                    case 0x90: {
                        const int pitch = in.u8() & 0x7f;
                        const int vel = in.u8() & 0x7f;
                        const int key = (channel << 8) | pitch;
                        if (vel > 0) {
                            open[key].push_back(OpenNote{tick, vel});
                        } else if (!open[key].empty()) {
                            auto on = open[key].front();
                            open[key].pop_front();
                            track.notes.push_back(RawNote{on.tick, pitch, tick - on.tick, on.velocity});
                        }
                        break;
                    }
                    case 0x80: {
                        const int pitch = in.u8() & 0x7f;
                        in.skip(1);  // release velocity
                        const int key = (channel << 8) | pitch;
                        if (!open[key].empty()) {
                            auto on = open[key].front();
                            open[key].pop_front();
                            track.notes.push_back(RawNote{on.tick, pitch, tick - on.tick, on.velocity});
                        }
                        break;
                    }
                    case 0xa0:
                    case 0xb0:
                    case 0xe0:
                        in.skip(2);
                        break;
                    case 0xc0:
                    case 0xd0:
                        in.skip(1);
                        break;
                    default:
                        throw ParseError("invalid status byte", in.offset());
                }
            }
        }
        for (auto& [key, stack] : open) {
            if (!stack.empty()) {
                song.warnings.push_back("track " + std::to_string(trk) + ": " +
                                        std::to_string(stack.size()) +
                                        " unterminated note-on event(s) dropped");
            }
        }
        in.seek(track_end);
    }

    // Rescale everything to 480 ticks per quarter and fix event order.
    for (auto& track : song.tracks) {
        for (auto& n : track.notes) {
            const std::int64_t off = rescale(n.onset + n.duration, division);
            n.onset = rescale(n.onset, division);
            n.duration = off - n.onset;
        }
        std::stable_sort(track.notes.begin(), track.notes.end(),
                         [](const RawNote& a, const RawNote& b) {
                             return a.onset != b.onset ? a.onset < b.onset : a.pitch < b.pitch;
                         });
        for (auto& l : track.lyrics) l.tick = rescale(l.tick, division);
        std::stable_sort(track.lyrics.begin(), track.lyrics.end(),
                         [](const RawLyric& a, const RawLyric& b) { return a.tick < b.tick; });
    }
    for (auto& t : song.tempos) t.tick = rescale(t.tick, division);
    for (auto& t : song.time_signatures) t.tick = rescale(t.tick, division);
    std::stable_sort(song.tempos.begin(), song.tempos.end(),
                     [](const TempoEvent& a, const TempoEvent& b) { return a.tick < b.tick; });
    std::stable_sort(song.time_signatures.begin(), song.time_signatures.end(),
                     [](const TimeSignatureEvent& a, const TimeSignatureEvent& b) {
                         return a.tick < b.tick;
                     });
    return song;
}

RawSong parse_midi_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open MIDI file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_midi(bytes);
}

}  // namespace songprep
