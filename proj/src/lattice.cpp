#include "kcd/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace kcd {

namespace detail {
extern const std::string_view kClusterHoneycomb8;
extern const std::string_view kClusterHoneycomb12;
extern const std::string_view kClusterHoneycomb18;
extern const std::string_view kClusterHoneycomb24;
extern const std::string_view kClusterKitaev4;
}  // namespace detail

char to_char(LinkType t) {
  switch (t) {
    case LinkType::x: return 'x';
    case LinkType::y: return 'y';
    case LinkType::z: return 'z';
  }
  return '?';
}

LinkType link_type_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return LinkType::x;
    case 'y': case 'Y': return LinkType::y;
    case 'z': case 'Z': return LinkType::z;
    default: throw std::invalid_argument(std::string("unknown link type '") + c + "'");
  }
}

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

ValidationError::ValidationError(ValidationErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '\r') ++end;
    if (end > pos) out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

int parse_int(std::string_view tok, int line, const char* field) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected integer for ") + field + ", got '" +
                               std::string(tok) + "'");
  }
  return value;
}

// 1-based label in the file -> 0-based index.
int parse_label(std::string_view tok, int line, const char* field) {
  int label = parse_int(tok, line, field);
  if (label < 1) throw ParseError(line, std::string(field) + " must be a positive site label");
  return label - 1;
}

LinkType parse_type(std::string_view tok, int line, const char* field) {
  if (tok.size() != 1) {
    throw ParseError(line, std::string("expected x, y or z for ") + field + ", got '" +
                               std::string(tok) + "'");
  }
  try {
    return link_type_from_char(tok[0]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, std::string(field) + ": " + e.what());
  }
}

std::string site_label(int site) { return std::to_string(site + 1); }

}  // namespace

ClusterSpec load_cluster(std::string_view text) {
  ClusterSpec spec;
  bool have_sites = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view key = tok[0];
    if (key == "sites") {
      if (have_sites) throw ParseError(line_no, "duplicate 'sites' header");
      if (tok.size() != 2) throw ParseError(line_no, "'sites' takes exactly one value");
      spec.n_sites = parse_int(tok[1], line_no, "site count");
      if (spec.n_sites < 1) throw ParseError(line_no, "site count must be positive");
      have_sites = true;
    } else if (key == "link") {
      if (!have_sites) throw ParseError(line_no, "'link' before 'sites' header");
      if (tok.size() != 4) throw ParseError(line_no, "'link' takes: i j type");
      spec.links.push_back({parse_label(tok[1], line_no, "link site i"),
                            parse_label(tok[2], line_no, "link site j"),
                            parse_type(tok[3], line_no, "link type")});
    } else if (key == "plaq") {
      if (!have_sites) throw ParseError(line_no, "'plaq' before 'sites' header");
      if (tok.size() != 7) throw ParseError(line_no, "'plaq' takes six site:label pairs");
      Plaquette p;
      for (int k = 0; k < 6; ++k) {
        auto item = tok[k + 1];
        auto colon = item.find(':');
        if (colon == std::string_view::npos) {
          throw ParseError(line_no, "plaquette entry '" + std::string(item) +
                                        "' is not of the form site:label");
        }
        p.sites[k] = {parse_label(item.substr(0, colon), line_no, "plaquette site"),
                      parse_type(item.substr(colon + 1), line_no, "plaquette label")};
      }
      spec.plaquettes.push_back(p);
    } else if (key == "part") {
      if (!have_sites) throw ParseError(line_no, "'part' before 'sites' header");
      if (tok.size() < 3) throw ParseError(line_no, "'part' takes a name and at least one site");
      Partition part{std::string(tok[1]), {}};
      for (std::size_t k = 2; k < tok.size(); ++k)
        part.sites.push_back(parse_label(tok[k], line_no, "partition site"));
      spec.partitions.push_back(std::move(part));
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(key) + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_sites) throw ParseError(line_no, "missing 'sites' header");
  return spec;
}

ClusterSpec load_cluster_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cluster file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_cluster(buf.str());
}

std::string save_cluster(const ClusterSpec& spec) {
  std::ostringstream out;
  out << "sites " << spec.n_sites << '\n';
  for (const auto& l : spec.links)
    out << "link " << site_label(l.i) << ' ' << site_label(l.j) << ' ' << to_char(l.type) << '\n';
  for (const auto& p : spec.plaquettes) {
    out << "plaq";
    for (const auto& s : p.sites) out << ' ' << site_label(s.site) << ':' << to_char(s.label);
    out << '\n';
  }
  for (const auto& part : spec.partitions) {
    out << "part " << part.name;
    for (int s : part.sites) out << ' ' << site_label(s);
    out << '\n';
  }
  return out.str();
}

HoneycombCluster validate(ClusterSpec spec, Boundary boundary) {
  using K = ValidationErrorKind;
  const int n = spec.n_sites;
  if (n < 1 || n > kMaxClusterSites)
    throw ValidationError(K::too_many_sites, "site count " + std::to_string(n) +
                                                 " outside [1, " +
                                                 std::to_string(kMaxClusterSites) + "]");
  auto check_site = [n](int s, const std::string& where) {
    if (s < 0 || s >= n)
      throw ValidationError(K::site_out_of_range,
                            where + ": site " + site_label(s) + " outside 1.." + std::to_string(n));
  };

  HoneycombCluster c;
  c.adjacency_.assign(n, {-1, -1, -1});
  std::set<std::pair<int, int>> seen;
  for (const auto& l : spec.links) {
    check_site(l.i, "link");
    check_site(l.j, "link");
    if (l.i == l.j) throw ValidationError(K::self_link, "link joins site " + site_label(l.i) + " to itself");
    auto key = std::minmax(l.i, l.j);
    if (!seen.insert(key).second)
      throw ValidationError(K::duplicate_link, "duplicate link " + site_label(key.first) + "-" +
                                                   site_label(key.second));
    const int t = static_cast<int>(l.type);
    for (int s : {l.i, l.j}) {
      if (c.adjacency_[s][t] != -1)
        throw ValidationError(K::link_type_multiplicity,
                              "link type multiplicity: site " + site_label(s) + " has more than one " +
                                  to_char(l.type) + "-link");
    }
    c.adjacency_[l.i][t] = l.j;
    c.adjacency_[l.j][t] = l.i;
    c.by_type_[t].push_back(l);
  }

  if (boundary == Boundary::toroidal) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < 3; ++t) {
        if (c.adjacency_[s][t] == -1) {
          int degree = static_cast<int>(std::count_if(c.adjacency_[s].begin(), c.adjacency_[s].end(),
                                                      [](int v) { return v != -1; }));
          throw ValidationError(K::missing_link_type,
                                "site " + site_label(s) + " has degree " + std::to_string(degree) +
                                    " and no " + to_char(static_cast<LinkType>(t)) + "-link");
        }
      }
    }
    if (n % 2 != 0) throw ValidationError(K::odd_site_count, "toroidal cluster needs an even site count");
  }

  std::vector<int> owner(n, -1);
  std::set<std::string> names;
  for (std::size_t k = 0; k < spec.partitions.size(); ++k) {
    const auto& part = spec.partitions[k];
    if (part.sites.empty()) throw ValidationError(K::bad_partition, "partition " + part.name + " is empty");
    if (!names.insert(part.name).second)
      throw ValidationError(K::bad_partition, "partition name " + part.name + " used twice");
    for (int s : part.sites) {
      check_site(s, "partition " + part.name);
      if (owner[s] != -1) {
        const auto& other = spec.partitions[owner[s]].name;
        throw ValidationError(K::overlapping_partitions,
                              "site " + site_label(s) + " is in partitions " + other + " and " + part.name);
      }
      owner[s] = static_cast<int>(k);
    }
  }

  for (const auto& p : spec.plaquettes) {
    std::set<int> distinct;
    for (const auto& ps : p.sites) {
      check_site(ps.site, "plaquette");
      distinct.insert(ps.site);
    }
    if (distinct.size() != 6)
      throw ValidationError(K::plaquette_not_closed, "plaquette repeats a site");
    for (int k = 0; k < 6; ++k) {
      const int a = p.sites[k].site;
      const int b = p.sites[(k + 1) % 6].site;
      const auto& adj = c.adjacency_[a];
      if (std::find(adj.begin(), adj.end(), b) == adj.end())
        throw ValidationError(K::plaquette_not_closed, "plaquette is not closed: sites " + site_label(a) +
                                                           " and " + site_label(b) + " are not linked");
    }
    for (int k = 0; k < 6; ++k) {
      const int s = p.sites[k].site;
      const int prev = p.sites[(k + 5) % 6].site;
      const int next = p.sites[(k + 1) % 6].site;
      const int out = c.adjacency_[s][static_cast<int>(p.sites[k].label)];
      if (out == -1 && boundary == Boundary::open) continue;
      if (out == -1 || out == prev || out == next)
        throw ValidationError(K::plaquette_label_mismatch,
                              "plaquette label at site " + site_label(s) +
                                  " must be the type of its link leaving the loop");
    }
  }

  c.spec_ = std::move(spec);
  c.boundary_ = boundary;
  return c;
}

std::optional<int> HoneycombCluster::neighbour(int site, LinkType t) const {
  if (site < 0 || site >= n_sites()) throw std::out_of_range("site index out of range");
  int v = adjacency_[site][static_cast<int>(t)];
  if (v < 0) return std::nullopt;
  return v;
}

const Partition* HoneycombCluster::find_partition(std::string_view name) const {
  for (const auto& p : spec_.partitions)
    if (p.name == name) return &p;
  return nullptr;
}

const Plaquette& HoneycombCluster::reference_plaquette() const {
  if (spec_.plaquettes.empty()) throw std::logic_error("cluster " + name_ + " defines no plaquettes");
  return spec_.plaquettes.front();
}

namespace {

std::string_view builtin_text(std::string_view name) {
  if (name == "honeycomb8") return detail::kClusterHoneycomb8;
  if (name == "honeycomb12") return detail::kClusterHoneycomb12;
  if (name == "honeycomb18") return detail::kClusterHoneycomb18;
  if (name == "honeycomb24") return detail::kClusterHoneycomb24;
  if (name == "kitaev4") return detail::kClusterKitaev4;
  return {};
}

}  // namespace

HoneycombCluster builtin_cluster(std::string_view name) {
  auto text = builtin_text(name);
  if (text.empty()) throw std::invalid_argument("unknown built-in cluster '" + std::string(name) + "'");
  auto cluster = validate(load_cluster(text));
  cluster.set_name(std::string(name));
  return cluster;
}

std::vector<std::string> builtin_cluster_names() {
  return {"kitaev4", "honeycomb8", "honeycomb12", "honeycomb18", "honeycomb24"};
}

HoneycombCluster standard_cluster_24() { return builtin_cluster("honeycomb24"); }

HoneycombCluster resolve_cluster(const std::string& ref) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.starts_with(prefix)) return builtin_cluster(std::string_view(ref).substr(prefix.size()));
  if (!builtin_text(ref).empty() && !std::filesystem::exists(ref)) return builtin_cluster(ref);
  auto cluster = validate(load_cluster_file(ref));
  cluster.set_name(std::filesystem::path(ref).stem().string());
  return cluster;
}

}  // namespace kcd
