#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace songprep {

struct RawNote {
    std::int64_t onset = 0;  // ticks, rescaled to 480 per quarter
    int pitch = 0;
    std::int64_t duration = 0;
    int velocity = 0;

    bool operator==(const RawNote&) const = default;
};

struct RawLyric {
    std::int64_t tick = 0;
    std::string text;  // fragment as stored in the file, unmodified
};

struct TempoEvent {
    std::int64_t tick = 0;
    double bpm = 120.0;
    std::uint32_t usec_per_quarter = 500000;
};

struct TimeSignatureEvent {
    std::int64_t tick = 0;
    int numerator = 4;
    int denominator = 4;
};

struct RawTrack {
    std::vector<RawNote> notes;
    std::vector<RawLyric> lyrics;
};

struct RawSong {
    std::vector<RawTrack> tracks;
    std::vector<TempoEvent> tempos;
    std::vector<TimeSignatureEvent> time_signatures;
    std::vector<std::string> warnings;

    // The melody is the lyric-bearing track: the first track holding both
    // lyric events and notes. Returns -1 when no track qualifies.
    int melody_track() const;

    bool has_lyrics() const;
};

// Standard MIDI File, type 0 or 1. Note on/off pairs are resolved to
// (onset, duration), lyric (FF 05) and text (FF 01) meta events are kept as
// fragments, tempo and time-signature maps are collected, and all ticks are
// rescaled to 480 per quarter note. Unterminated notes are dropped with a
// warning; structural damage raises ParseError with the byte offset.
RawSong parse_midi(std::span<const std::uint8_t> bytes);

RawSong parse_midi_file(const std::string& path);

}  // namespace songprep
