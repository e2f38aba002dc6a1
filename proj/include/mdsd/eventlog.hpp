#pragma once

#include <string>
#include <vector>

#include "mdsd/types.hpp"

namespace mdsd {

enum class EventKind {
    Placed,
    Pickup,
    Dropoff,
    Ignored,
    Reinserted,
    Epoch,
    IdleReturn,
    Drive,  // one record per completed arc; carries driven time
    Halt,   // partial arc cut off at day close
};

const char* to_string(EventKind k);

struct Event {
    TimeMs time = 0;
    EventKind kind = EventKind::Epoch;
    OrderId order = kNoOrder;
    VehicleId vehicle = kNoVehicle;
    NodeId node = kNoNode;
    TimeMs drive_ms = 0;  // drive/halt records only
    bool reloc = false;   // drive/halt records: relocation leg
};

class EventLog {
public:
    void append(Event e) { events_.push_back(e); }
    void append_sorted(std::vector<Event> batch);

    const std::vector<Event>& events() const { return events_; }
    bool empty() const { return events_.empty(); }

    // One JSON object per line with fields time, kind, order, vehicle, node.
    // Drive records are an in-memory detail and only written when asked.
    void write_jsonl(const std::string& path, bool include_drives = false) const;

private:
    std::vector<Event> events_;
};

}  // namespace mdsd
