#include "mdsd/eventlog.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <tuple>

namespace mdsd {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Placed: return "placed";
        case EventKind::Pickup: return "pickup";
        case EventKind::Dropoff: return "dropoff";
        case EventKind::Ignored: return "ignored";
        case EventKind::Reinserted: return "reinserted";
        case EventKind::Epoch: return "epoch";
        case EventKind::IdleReturn: return "idle-return";
        case EventKind::Drive: return "drive";
        case EventKind::Halt: return "halt";
    }
    return "?";
}

void EventLog::append_sorted(std::vector<Event> batch) {
    std::stable_sort(batch.begin(), batch.end(), [](const Event& a, const Event& b) {
        return std::tie(a.time, a.kind, a.vehicle, a.order, a.node) <
               std::tie(b.time, b.kind, b.vehicle, b.order, b.node);
    });
    events_.insert(events_.end(), batch.begin(), batch.end());
}

void EventLog::write_jsonl(const std::string& path, bool include_drives) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("eventlog: cannot write " + path);
    char buf[256];
    for (const Event& e : events_) {
        bool drive = e.kind == EventKind::Drive || e.kind == EventKind::Halt;
        if (drive && !include_drives) continue;
        if (drive) {
            std::snprintf(buf, sizeof buf,
                          "{\"time\": %.3f, \"kind\": \"%s\", \"order\": null, \"vehicle\": %d, "
                          "\"node\": %d, \"drive_s\": %.3f, \"reloc\": %s}\n",
                          ms_to_seconds(e.time), to_string(e.kind), e.vehicle, e.node,
                          ms_to_seconds(e.drive_ms), e.reloc ? "true" : "false");
            out << buf;
            continue;
        }
        std::string order = e.order == kNoOrder ? "null" : std::to_string(e.order);
        std::string vehicle = e.vehicle == kNoVehicle ? "null" : std::to_string(e.vehicle);
        std::string node = e.node == kNoNode ? "null" : std::to_string(e.node);
        std::snprintf(buf, sizeof buf,
                      "{\"time\": %.3f, \"kind\": \"%s\", \"order\": %s, \"vehicle\": %s, "
                      "\"node\": %s}\n",
                      ms_to_seconds(e.time), to_string(e.kind), order.c_str(), vehicle.c_str(),
                      node.c_str());
        out << buf;
    }
}

}  // namespace mdsd
