#include "semibus/model.hpp"

#include <algorithm>

namespace semibus {

std::optional<Direction> parse_direction(const std::string& text) {
  if (text == "incoming") return Direction::incoming;
  if (text == "outgoing") return Direction::outgoing;
  return std::nullopt;
}

std::optional<EventType> parse_event_type(const std::string& text) {
  if (text == "arriving") return EventType::arriving;
  if (text == "departing") return EventType::departing;
  return std::nullopt;
}

const char* to_string(Direction d) {
  return d == Direction::incoming ? "incoming" : "outgoing";
}

const char* to_string(EventType t) {
  return t == EventType::arriving ? "arriving" : "departing";
}

StationRegistry::StationRegistry(std::vector<Station> stations) {
  for (const Station& s : stations) {
    auto [it, inserted] = by_id_.emplace(s.stop_id, s);
    if (!inserted) throw Error("duplicate stop_id '" + s.stop_id + "'");
  }
  all_ = std::move(stations);
  std::sort(all_.begin(), all_.end(), [](const Station& a, const Station& b) {
    if (a.direction != b.direction) return a.direction < b.direction;
    return a.route_position < b.route_position;
  });
  for (const Station& s : all_) {
    (s.direction == Direction::incoming ? incoming_ : outgoing_).push_back(s);
  }

  for (const auto* seq : {&incoming_, &outgoing_}) {
    if (seq->empty()) continue;
    const char* dir = to_string(seq->front().direction);
    if (seq->size() < 2) {
      throw Error(std::string("route for direction '") + dir +
                  "' needs at least two stations");
    }
    int origins = 0;
    int termini = 0;
    for (size_t i = 0; i < seq->size(); ++i) {
      const Station& s = (*seq)[i];
      if (s.route_position != static_cast<int>(i)) {
        throw Error("non-contiguous route_position in direction '" +
                    std::string(dir) + "' at stop '" + s.stop_id + "'");
      }
      origins += s.is_origin ? 1 : 0;
      termini += s.is_terminus ? 1 : 0;
    }
    if (origins != 1 || !seq->front().is_origin) {
      throw Error(std::string("direction '") + dir +
                  "' must have exactly one origin at route_position 0");
    }
    if (termini != 1 || !seq->back().is_terminus) {
      throw Error(std::string("direction '") + dir +
                  "' must have exactly one terminus at the last route_position");
    }
  }
}

const std::vector<Station>& StationRegistry::route(Direction d) const {
  return d == Direction::incoming ? incoming_ : outgoing_;
}

const Station* StationRegistry::find(const std::string& stop_id) const {
  auto it = by_id_.find(stop_id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const Station& StationRegistry::require(const std::string& stop_id) const {
  const Station* s = find(stop_id);
  if (!s) throw Error("unknown stop_id '" + stop_id + "'");
  return *s;
}

const Station& StationRegistry::origin(Direction d) const {
  const auto& seq = route(d);
  if (seq.empty()) throw Error("no stations for requested direction");
  return seq.front();
}

const Station& StationRegistry::terminus(Direction d) const {
  const auto& seq = route(d);
  if (seq.empty()) throw Error("no stations for requested direction");
  return seq.back();
}

}  // namespace semibus
