#include "session.hpp"

#include <cmath>
#include <set>

namespace pnsubd::frontdoor {

Session::Session(std::string id, PNMesh base, SchemeKind scheme, Variant variant)
    : id_(std::move(id)), scheme_(scheme), variant_(variant), base_(std::move(base)) {
  base_.ensure_normal_slots();
}

PNMesh Session::base() const {
  std::shared_lock lock(state_mutex_);
  return base_;
}

std::shared_ptr<const PNMesh> Session::mesh(const MeshRequest& request) {
  if (request.level < 0) throw Error(ErrorCode::InvalidArgument, "level must be non-negative");
  // Readers share the state lock so an edit never interleaves with a refinement.
  std::shared_lock lock(state_mutex_);
  const int scheme = static_cast<int>(request.scheme);
  const int variant = static_cast<int>(request.variant);

  std::shared_ptr<const PNMesh> start;
  int start_level = 0;
  {
    std::lock_guard cache_lock(cache_mutex_);
    for (int level = request.level; level > 0; --level) {
      const auto it = cache_.find({scheme, variant, level});
      if (it != cache_.end()) {
        start = it->second;
        start_level = level;
        break;
      }
    }
  }
  if (start_level == request.level && start) return start;

  PNMesh current = start ? *start : base_;
  for (int level = start_level; level < request.level; ++level) {
    current = refine_round(current, request.scheme, request.variant, level);
    auto shared = std::make_shared<const PNMesh>(current);
    std::lock_guard cache_lock(cache_mutex_);
    cache_.try_emplace({scheme, variant, level + 1}, shared);
  }
  if (request.level == 0) return std::make_shared<const PNMesh>(current);
  std::lock_guard cache_lock(cache_mutex_);
  return cache_.at({scheme, variant, request.level});
}

std::vector<int> Session::edit_normals(const std::vector<NormalEdit>& edits) {
  std::unique_lock lock(state_mutex_);
  for (const NormalEdit& e : edits) {
    if (e.vertex < 0 || static_cast<std::size_t>(e.vertex) >= base_.vertex_count()) {
      throw Error(ErrorCode::IndexOutOfRange, "edit targets vertex " + std::to_string(e.vertex));
    }
    if (!e.normal.allFinite()) throw Error(ErrorCode::InvalidArgument, "edited normal is not finite");
  }
  for (const NormalEdit& e : edits) {
    base_.normals[static_cast<std::size_t>(e.vertex)] = is_zero(e.normal) ? Vec3(Vec3::Zero()) : Vec3(e.normal.normalized());
  }
  std::set<int> levels;
  std::lock_guard cache_lock(cache_mutex_);
  for (const auto& [key, mesh] : cache_) levels.insert(std::get<2>(key));
  cache_.clear();
  return {levels.begin(), levels.end()};
}

std::shared_ptr<Session> SessionStore::create(PNMesh mesh, SchemeKind scheme, Variant variant) {
  auto session = std::make_shared<Session>(random_token(), std::move(mesh), scheme, variant);
  std::unique_lock lock(mutex_);
  sessions_.emplace(session->id(), session);
  return session;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool SessionStore::remove(const std::string& id) {
  std::unique_lock lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

}  // namespace pnsubd::frontdoor
