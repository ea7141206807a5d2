#pragma once

// In-memory editing sessions: a base mesh whose normals can be edited, plus
// refined levels computed on demand and cached until the next edit.

#include <pnsubd/schemes.hpp>

#include "codec.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace pnsubd::frontdoor {

struct NormalEdit {
  int vertex = -1;
  /// Renormalized on apply; the zero vector clears the normal.
  Vec3 normal = Vec3::Zero();
};

struct MeshRequest {
  SchemeKind scheme = SchemeKind::CatmullClark;
  Variant variant = Variant::PN;
  int level = 0;
};

class Session {
 public:
  Session(std::string id, PNMesh base, SchemeKind scheme, Variant variant);

  const std::string& id() const noexcept { return id_; }
  SchemeKind default_scheme() const noexcept { return scheme_; }
  Variant default_variant() const noexcept { return variant_; }

  /// Level `request.level` of the current base, computed incrementally from
  /// the deepest cached level of the same scheme and variant.
  std::shared_ptr<const PNMesh> mesh(const MeshRequest& request);

  /// Applies edits atomically and drops every cached level. Returns the
  /// distinct levels that were cached before the edit, ascending.
  std::vector<int> edit_normals(const std::vector<NormalEdit>& edits);

  PNMesh base() const;

 private:
  using Key = std::tuple<int, int, int>;

  std::string id_;
  SchemeKind scheme_;
  Variant variant_;
  mutable std::shared_mutex state_mutex_;
  PNMesh base_;
  std::mutex cache_mutex_;
  std::map<Key, std::shared_ptr<const PNMesh>> cache_;
};

class SessionStore {
 public:
  explicit SessionStore(int max_level = 8) : max_level_(max_level) {}

  std::shared_ptr<Session> create(PNMesh mesh, SchemeKind scheme = SchemeKind::CatmullClark,
                                  Variant variant = Variant::PN);
  /// nullptr when unknown.
  std::shared_ptr<Session> find(const std::string& id) const;
  bool remove(const std::string& id);
  std::size_t size() const;
  int max_level() const noexcept { return max_level_; }

 private:
  int max_level_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace pnsubd::frontdoor
