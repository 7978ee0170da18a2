#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kcd {

/// Bond direction of a Kitaev link; also the Pauli label of a plaquette site.
enum class LinkType : std::uint8_t { x = 0, y = 1, z = 2 };

char to_char(LinkType t);
LinkType link_type_from_char(char c);

/// Site indices are 0-based in memory and 1-based in files and reports.
struct Link {
  int i = 0;
  int j = 0;
  LinkType type = LinkType::z;

  friend bool operator==(const Link&, const Link&) = default;
};

struct PlaquetteSite {
  int site = 0;
  LinkType label = LinkType::z;

  friend bool operator==(const PlaquetteSite&, const PlaquetteSite&) = default;
};

/// Ordered hexagonal loop. Each site carries the type of its bond that
/// leaves the loop; the flux operator is the product of those Paulis.
struct Plaquette {
  std::array<PlaquetteSite, 6> sites{};

  friend bool operator==(const Plaquette&, const Plaquette&) = default;
};

struct Partition {
  std::string name;
  std::vector<int> sites;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Parsed but unvalidated cluster description.
struct ClusterSpec {
  int n_sites = 0;
  std::vector<Link> links;
  std::vector<Plaquette> plaquettes;
  std::vector<Partition> partitions;

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class ValidationErrorKind {
  too_many_sites,
  site_out_of_range,
  self_link,
  duplicate_link,
  link_type_multiplicity,
  missing_link_type,
  odd_site_count,
  overlapping_partitions,
  bad_partition,
  plaquette_not_closed,
  plaquette_label_mismatch,
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationErrorKind kind, const std::string& what);
  ValidationErrorKind kind() const noexcept { return kind_; }

 private:
  ValidationErrorKind kind_;
};

/// Parses the line-oriented cluster format:
///
///     sites N
///     link i j t            # t in {x, y, z}
///     plaq i1:t1 ... i6:t6
///     part NAME i1 i2 ...
///
/// Labels are 1-based, `#` starts a comment. Only syntax is checked here.
ClusterSpec load_cluster(std::string_view text);
ClusterSpec load_cluster_file(const std::filesystem::path& path);

/// Inverse of load_cluster: load_cluster(save_cluster(s)) == s.
std::string save_cluster(const ClusterSpec& spec);

/// Toroidal clusters need one x, one y and one z link on every site. Open
/// fragments only forbid repeated link types; they exist for tiny oracles.
enum class Boundary { toroidal, open };

class HoneycombCluster {
 public:
  int n_sites() const noexcept { return spec_.n_sites; }
  const ClusterSpec& spec() const noexcept { return spec_; }
  Boundary boundary() const noexcept { return boundary_; }

  std::span<const Link> links() const noexcept { return spec_.links; }
  std::span<const Link> links(LinkType t) const noexcept {
    return by_type_[static_cast<int>(t)];
  }
  std::span<const Plaquette> plaquettes() const noexcept { return spec_.plaquettes; }
  std::span<const Partition> partitions() const noexcept { return spec_.partitions; }

  /// Neighbour of `site` across its link of type `t`, if present.
  std::optional<int> neighbour(int site, LinkType t) const;

  const Partition* find_partition(std::string_view name) const;

  /// First listed plaquette; throws if the cluster has none.
  const Plaquette& reference_plaquette() const;

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  friend HoneycombCluster validate(ClusterSpec spec, Boundary boundary);

  ClusterSpec spec_;
  Boundary boundary_ = Boundary::toroidal;
  std::array<std::vector<Link>, 3> by_type_;
  std::vector<std::array<int, 3>> adjacency_;  // [site][type] -> neighbour or -1
  std::string name_;
};

inline constexpr int kMaxClusterSites = 62;

HoneycombCluster validate(ClusterSpec spec, Boundary boundary = Boundary::toroidal);

/// Built-in 24-site torus with the reference labels, partitions A, B, C and
/// the reference plaquette {1,4,9,13,10,5}.
HoneycombCluster standard_cluster_24();

/// honeycomb8, honeycomb12, honeycomb18, honeycomb24 or kitaev4.
HoneycombCluster builtin_cluster(std::string_view name);
std::vector<std::string> builtin_cluster_names();

/// Resolves "builtin:<name>", a bare built-in name, or a file path.
HoneycombCluster resolve_cluster(const std::string& ref);

}  // namespace kcd
