#include "silcorr/fusion.hpp"

#include "silcorr/error.hpp"

#include <algorithm>

namespace silcorr::sim
{

void validate(const FusionConfig & config)
{
  if (config.confirm_cycles < 1 || config.coast_cycles < 0) {
    throw Error(ErrorCode::InvalidConfig, "fusion cycle counts out of range");
  }
  if (!(config.ema_alpha > 0.0 && config.ema_alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "fusion ema_alpha must lie in (0, 1]");
  }
}

SensorFusion::SensorFusion(FusionConfig config, double cycle_period)
: config_(config), cycle_period_(cycle_period)
{
  validate(config_);
}

std::vector<TrackedObject> SensorFusion::update(std::span<const Detection> detections)
{
  std::vector<bool> seen(tracks_.size(), false);
  const double alpha = config_.ema_alpha;

  for (const auto & d : detections) {
    auto it = std::find_if(tracks_.begin(), tracks_.end(), [&](const TrackedObject & t) {
      return t.actor_id == d.actor_id;
    });
    if (it == tracks_.end()) {
      TrackedObject track;
      track.track_id = next_track_id_++;
      track.actor_id = d.actor_id;
      track.range = d.range;
      track.range_rate = d.relative_speed;
      track.in_ego_lane = d.in_ego_lane;
      track.confirmation_age = 1;
      track.first_seen_t = d.first_seen_t;
      track.confirmed = track.confirmation_age >= config_.confirm_cycles;
      tracks_.push_back(std::move(track));
      seen.push_back(true);
      continue;
    }
    const auto index = static_cast<std::size_t>(it - tracks_.begin());
    seen[index] = true;
    it->range = alpha * d.range + (1.0 - alpha) * it->range;
    it->range_rate = alpha * d.relative_speed + (1.0 - alpha) * it->range_rate;
    it->in_ego_lane = d.in_ego_lane;
    it->missed_cycles = 0;
    it->confirmation_age += 1;
    if (it->confirmation_age >= config_.confirm_cycles) it->confirmed = true;
  }

  // Tentative tracks die on the first miss; confirmed ones coast.
  std::vector<TrackedObject> kept;
  kept.reserve(tracks_.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    auto & track = tracks_[i];
    if (!seen[i]) {
      if (!track.confirmed) continue;
      track.missed_cycles += 1;
      track.confirmation_age = 0;
      if (track.missed_cycles > config_.coast_cycles) continue;
      track.range += track.range_rate * cycle_period_;
    }
    kept.push_back(std::move(track));
  }
  tracks_ = std::move(kept);

  std::vector<TrackedObject> reported;
  for (const auto & t : tracks_) {
    if (t.confirmed) reported.push_back(t);
  }
  return reported;
}

}  // namespace silcorr::sim
