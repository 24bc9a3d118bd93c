#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace testsupport {

// Minimal Standard MIDI File writer for test input. Events are given with
// absolute ticks and sorted on emission; note() writes a 0x90/0x80 pair.
class MidiFileBuilder {
public:
    explicit MidiFileBuilder(int division = 480, int tracks = 1, bool running_status = false)
        : division_(division), running_status_(running_status), tracks_(tracks) {}

    void tempo(int track, std::int64_t tick, double bpm) {
        const std::uint32_t usec = static_cast<std::uint32_t>(60000000.0 / bpm + 0.5);
        meta(track, tick, 0x51,
             {static_cast<std::uint8_t>(usec >> 16), static_cast<std::uint8_t>(usec >> 8),
              static_cast<std::uint8_t>(usec)});
    }

    void tempo_usec(int track, std::int64_t tick, std::uint32_t usec) {
        meta(track, tick, 0x51,
             {static_cast<std::uint8_t>(usec >> 16), static_cast<std::uint8_t>(usec >> 8),
              static_cast<std::uint8_t>(usec)});
    }

    void time_signature(int track, std::int64_t tick, int numerator, int denominator_pow2) {
        meta(track, tick, 0x58,
             {static_cast<std::uint8_t>(numerator), static_cast<std::uint8_t>(denominator_pow2),
              24, 8});
    }

    void lyric(int track, std::int64_t tick, const std::string& text) {
        std::vector<std::uint8_t> data(text.begin(), text.end());
        meta(track, tick, 0x05, data);
    }

    void text_event(int track, std::int64_t tick, const std::string& text) {
        std::vector<std::uint8_t> data(text.begin(), text.end());
        meta(track, tick, 0x01, data);
    }

    void note(int track, std::int64_t tick, int pitch, int duration, int velocity = 80,
              int channel = 0) {
        push(track, tick, 0,
             {static_cast<std::uint8_t>(0x90 | channel), static_cast<std::uint8_t>(pitch),
              static_cast<std::uint8_t>(velocity)});
        push(track, tick + duration, 1,
             {static_cast<std::uint8_t>(0x80 | channel), static_cast<std::uint8_t>(pitch), 64});
    }

    // A dangling note-on, for the unterminated-note warning path.
    void orphan_note_on(int track, std::int64_t tick, int pitch, int velocity = 80) {
        push(track, tick, 0, {0x90, static_cast<std::uint8_t>(pitch),
                              static_cast<std::uint8_t>(velocity)});
    }

    std::vector<std::uint8_t> bytes() const {
        std::vector<std::uint8_t> out;
        append_str(out, "MThd");
        append_u32(out, 6);
        append_u16(out, tracks_.size() > 1 ? 1 : 0);
        append_u16(out, static_cast<std::uint16_t>(tracks_.size()));
        append_u16(out, static_cast<std::uint16_t>(division_));
        for (const auto& track : tracks_) {
            std::vector<Event> events = track;
            std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
                if (a.tick != b.tick) return a.tick < b.tick;
                return a.order < b.order;
            });
            std::vector<std::uint8_t> body;
            std::int64_t last_tick = 0;
            int last_status = -1;
            for (const auto& e : events) {
                append_vlq(body, static_cast<std::uint32_t>(e.tick - last_tick));
                last_tick = e.tick;
                const int status = e.data.empty() ? -1 : e.data.front();
                const bool channel_event = status >= 0x80 && status < 0xf0;
                if (running_status_ && channel_event && status == last_status) {
                    body.insert(body.end(), e.data.begin() + 1, e.data.end());
                } else {
                    body.insert(body.end(), e.data.begin(), e.data.end());
                }
                last_status = channel_event ? status : -1;
            }
            // end of track
            append_vlq(body, 0);
            body.push_back(0xff);
            body.push_back(0x2f);
            body.push_back(0x00);

            append_str(out, "MTrk");
            append_u32(out, static_cast<std::uint32_t>(body.size()));
            out.insert(out.end(), body.begin(), body.end());
        }
        return out;
    }

private:
    struct Event {
        std::int64_t tick;
        int order;
        std::vector<std::uint8_t> data;
    };

    void push(int track, std::int64_t tick, int order, std::vector<std::uint8_t> data) {
        tracks_[track].push_back(Event{tick, order, std::move(data)});
    }

    void meta(int track, std::int64_t tick, std::uint8_t type, std::vector<std::uint8_t> data) {
        std::vector<std::uint8_t> bytes{0xff, type};
        append_vlq(bytes, static_cast<std::uint32_t>(data.size()));
        bytes.insert(bytes.end(), data.begin(), data.end());
        push(track, tick, -1, std::move(bytes));
    }

    static void append_str(std::vector<std::uint8_t>& out, const char* s) {
        while (*s) out.push_back(static_cast<std::uint8_t>(*s++));
    }
    static void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
        for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    static void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v));
    }
    static void append_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
        std::uint8_t buf[4];
        int n = 0;
        buf[n++] = v & 0x7f;
        while (v >>= 7) buf[n++] = (v & 0x7f) | 0x80;
        while (n--) out.push_back(buf[n]);
    }

    int division_;
    bool running_status_;
    std::vector<std::vector<Event>> tracks_;
};

}  // namespace testsupport
