#include "posethdx/builders.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "posethdx/errors.hpp"

namespace posethdx {

std::vector<int> FacetList::vertices() const {
  std::set<int> vs;
  for (const auto& f : facets) vs.insert(f.begin(), f.end());
  return {vs.begin(), vs.end()};
}

int FacetList::dimension() const {
  if (facets.empty()) fail(ErrorCode::BadArgs, "empty facet list");
  return static_cast<int>(facets.front().size()) - 1;
}

FacetList read_facet_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open facet file " + path);
  FacetList out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> facet;
    int v;
    while (ss >> v) facet.push_back(v);
    if (!ss.eof()) fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": expected integers");
    if (facet.empty()) continue;
    std::sort(facet.begin(), facet.end());
    facet.erase(std::unique(facet.begin(), facet.end()), facet.end());
    out.facets.push_back(std::move(facet));
  }
  if (out.facets.empty()) fail(ErrorCode::Parse, path + ": no facets");
  return out;
}

namespace {

std::string face_label(const std::vector<int>& face) {
  std::string s = "{";
  for (size_t i = 0; i < face.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(face[i]);
  }
  return s + "}";
}

}  // namespace

GradedPoset from_facets(const FacetList& facets) {
  const int d = facets.dimension();
  for (const auto& f : facets.facets) {
    if (static_cast<int>(f.size()) != d + 1)
      fail(ErrorCode::NonPure, "facet " + face_label(f) + " has size " + std::to_string(f.size()) +
                                   ", expected " + std::to_string(d + 1));
  }

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> faces;
  auto intern = [&](const std::vector<int>& face) {
    auto [it, inserted] = index.emplace(face, static_cast<int>(faces.size()));
    if (inserted) faces.push_back(face);
    return it->second;
  };

  for (const auto& facet : facets.facets) {
    const int k = static_cast<int>(facet.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> face;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) face.push_back(facet[i]);
      intern(face);
    }
  }

  std::vector<int> ranks(faces.size());
  std::vector<std::string> labels(faces.size());
  for (size_t i = 0; i < faces.size(); ++i) {
    ranks[i] = static_cast<int>(faces[i].size()) - 1;
    labels[i] = face_label(faces[i]);
  }
  std::vector<std::pair<int, int>> covers;
  for (size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].empty()) continue;
    for (size_t drop = 0; drop < faces[i].size(); ++drop) {
      std::vector<int> sub = faces[i];
      sub.erase(sub.begin() + drop);
      covers.emplace_back(index.at(sub), static_cast<int>(i));
    }
  }
  return make_graded_poset(std::move(ranks), std::move(labels), covers);
}

WeightScheme standard_weight_scheme(const GradedPoset& poset, std::vector<double> top_weights) {
  const int d = poset.top_rank();
  const int tops = poset.level_size(d);
  if (top_weights.empty()) top_weights.assign(tops, 1.0);
  if (static_cast<int>(top_weights.size()) != tops)
    fail(ErrorCode::BadArgs, "expected one weight per maximal element");
  double total = 0.0;
  for (double w : top_weights) {
    if (w <= 0.0) fail(ErrorCode::BadArgs, "top weights must be positive");
    total += w;
  }

  WeightScheme scheme;
  scheme.m.assign(poset.size(), 0.0);
  scheme.p.assign(poset.size(), {});
  for (ElementId e = 0; e < poset.size(); ++e) {
    const size_t nn = poset.children(e).size();
    scheme.p[e].assign(nn, nn ? 1.0 / static_cast<double>(nn) : 0.0);
  }
  for (int i = 0; i < tops; ++i) scheme.m[poset.level(d)[i]] = top_weights[i] / total;
  // Ids descend with rank, so a reverse sweep sees parents before children.
  for (ElementId e = poset.size() - 1; e >= 0; --e) {
    if (poset.rank(e) == d) continue;
    double acc = 0.0;
    for (ElementId y : poset.parents(e)) {
      acc += scheme.m[y] / static_cast<double>(poset.children(y).size());
    }
    scheme.m[e] = acc;
  }
  scheme.standard = true;
  return scheme;
}

namespace {

// Membership probe for one dimension against the next; builds the cover
// relation of a family of subspaces listed by dimension.
std::vector<std::pair<int, int>> subspace_covers(const GaloisField& gf,
                                                 const std::vector<std::vector<int>>& ids_by_dim,
                                                 const std::vector<SubspaceCode>& codes) {
  std::vector<std::pair<int, int>> covers;
  for (size_t dim = 1; dim < ids_by_dim.size(); ++dim) {
    for (int parent : ids_by_dim[dim]) {
      for (int child : ids_by_dim[dim - 1]) {
        if (contains_subspace(gf, codes[parent], codes[child])) covers.emplace_back(child, parent);
      }
    }
  }
  return covers;
}

}  // namespace

GrassmannianPoset grassmannian(int q, int n, int d, long long max_elements) {
  if (d > n - 1 || d < 0 || n < 1) fail(ErrorCode::BadArgs, "need 0 <= d <= n-1");
  long long total = 0;
  for (int k = 0; k <= d + 1; ++k) total += gaussian_binomial(n, k, q);
  if (total > max_elements)
    fail(ErrorCode::ResourceLimit, std::to_string(total) + " subspaces exceed the cap of " +
                                       std::to_string(max_elements));

  GaloisField gf(q);
  std::vector<SubspaceCode> codes;
  std::vector<std::vector<int>> ids_by_dim(d + 2);
  for (int k = 0; k <= d + 1; ++k) {
    for (auto& code : enumerate_subspaces(gf, n, k)) {
      ids_by_dim[k].push_back(static_cast<int>(codes.size()));
      codes.push_back(std::move(code));
    }
  }
  const auto covers = subspace_covers(gf, ids_by_dim, codes);

  std::vector<int> ranks(codes.size());
  std::vector<std::string> labels(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    ranks[i] = codes[i].dim() - 1;
    labels[i] = codes[i].to_string();
  }
  std::vector<int> remap;
  GrassmannianPoset out;
  out.q = q;
  out.ambient_dim = n;
  out.poset = make_graded_poset(std::move(ranks), std::move(labels), covers, &remap);
  out.codes.resize(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) out.codes[remap[i]] = std::move(codes[i]);
  out.weights = standard_weight_scheme(out.poset);
  return out;
}

PosetifiedComplex posetify(const FacetList& complex, int q, long long max_elements) {
  const int d = complex.dimension();
  const std::vector<int> verts = complex.vertices();
  const int n = static_cast<int>(verts.size());
  std::map<int, int> coord;
  for (int c = 0; c < n; ++c) coord[verts[c]] = c;

  GaloisField gf(q);
  std::map<std::string, int> seen;
  std::vector<SubspaceCode> codes;
  std::vector<std::vector<int>> ids_by_dim(d + 2);

  for (const auto& facet : complex.facets) {
    std::vector<int> support;
    for (int v : facet) support.push_back(coord.at(v));
    for (int k = 0; k <= d + 1; ++k) {
      for (auto& code : enumerate_subspaces_supported(gf, n, k, support)) {
        const std::string key = code.to_string();
        if (seen.emplace(key, static_cast<int>(codes.size())).second) {
          if (static_cast<long long>(codes.size()) >= max_elements)
            fail(ErrorCode::ResourceLimit, "posetification exceeds the cap of " +
                                               std::to_string(max_elements));
          ids_by_dim[k].push_back(static_cast<int>(codes.size()));
          codes.push_back(std::move(code));
        }
      }
    }
  }
  const auto covers = subspace_covers(gf, ids_by_dim, codes);

  std::vector<int> ranks(codes.size());
  std::vector<std::string> labels(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    ranks[i] = codes[i].dim() - 1;
    labels[i] = codes[i].to_string();
  }
  std::vector<int> remap;
  PosetifiedComplex out;
  out.q = q;
  out.ambient_dim = n;
  out.complex = complex;
  out.vertex_order = verts;
  out.poset = make_graded_poset(std::move(ranks), std::move(labels), covers, &remap);
  out.codes.resize(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) out.codes[remap[i]] = std::move(codes[i]);
  out.weights = standard_weight_scheme(out.poset);
  return out;
}

int thickness(const FacetList& complex) {
  std::map<std::vector<int>, int> cofaces;
  for (const auto& facet : complex.facets) {
    for (size_t drop = 0; drop < facet.size(); ++drop) {
      std::vector<int> ridge = facet;
      ridge.erase(ridge.begin() + drop);
      ++cofaces[ridge];
    }
  }
  int best = 0;
  for (const auto& [ridge, count] : cofaces) best = std::max(best, count - 1);
  return best;
}

bool graph_connected(const SimpleGraph& g) {
  if (g.n == 0) return false;
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<bool> seen(g.n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n;
}

std::vector<int> bipartition(const SimpleGraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> color(g.n, -1);
  for (int s = 0; s < g.n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          stack.push_back(v);
        } else if (color[v] == color[u]) {
          fail(ErrorCode::NotBipartite, "graph contains an odd cycle");
        }
      }
    }
  }
  return color;
}

NormalizedGraph bouquet_graph(int p, int q) {
  if (p < 1 || q < 2) fail(ErrorCode::BadArgs, "need p >= 1 and q >= 2");
  const int n = p * q + 1;
  const int hub = n - 1;
  NormalizedGraph g;
  g.walk = Matrix(n, n);
  g.measure.assign(n, 1.0);
  g.measure[hub] = static_cast<double>(p);
  g.labels.resize(n);
  for (int a = 0; a < p; ++a)
    for (int i = 0; i < q; ++i) g.labels[a * q + i] = "spoke:" + std::to_string(a) + "." + std::to_string(i);
  g.labels[hub] = "hub";
  const double hub_step = 1.0 / static_cast<double>(p * q);
  const double spoke_step = 1.0 / static_cast<double>(q);
  for (int s = 0; s < p * q; ++s) {
    g.walk(hub, s) = hub_step;
    g.walk(s, hub) = spoke_step;
    const int clique = s / q;
    for (int t = clique * q; t < (clique + 1) * q; ++t)
      if (t != s) g.walk(s, t) = spoke_step;
  }
  return g;
}

NormalizedGraph link_graph_gprime(const SimpleGraph& g, int q) {
  if (q < 2) fail(ErrorCode::BadArgs, "need q >= 2");
  if (!graph_connected(g)) fail(ErrorCode::BadArgs, "graph must be connected");
  bipartition(g);  // throws NotBipartite on odd cycles

  const int m = g.n;
  const int e_count = static_cast<int>(g.edges.size());
  const int n = m + (q - 1) * e_count;
  std::vector<int> degree(m, 0);
  for (auto [u, v] : g.edges) {
    ++degree[u];
    ++degree[v];
  }

  NormalizedGraph out;
  out.walk = Matrix(n, n);
  out.measure.assign(n, 0.0);
  out.labels.resize(n);
  for (int v = 0; v < m; ++v) {
    out.labels[v] = "v" + std::to_string(v);
    out.measure[v] = static_cast<double>(degree[v] * q);
  }
  auto extra = [&](int e, int i) { return m + e * (q - 1) + i; };
  for (int e = 0; e < e_count; ++e)
    for (int i = 0; i < q - 1; ++i) {
      out.labels[extra(e, i)] =
          "e" + std::to_string(e) + "." + std::to_string(i);
      out.measure[extra(e, i)] = static_cast<double>(q);
    }

  std::vector<std::vector<int>> adj(n);
  for (int e = 0; e < e_count; ++e) {
    auto [u, v] = g.edges[e];
    adj[u].push_back(v);
    adj[v].push_back(u);
    for (int i = 0; i < q - 1; ++i) {
      adj[u].push_back(extra(e, i));
      adj[extra(e, i)].push_back(u);
      adj[v].push_back(extra(e, i));
      adj[extra(e, i)].push_back(v);
      for (int j = i + 1; j < q - 1; ++j) {
        adj[extra(e, i)].push_back(extra(e, j));
        adj[extra(e, j)].push_back(extra(e, i));
      }
    }
  }
  for (int u = 0; u < n; ++u) {
    const double step = 1.0 / static_cast<double>(adj[u].size());
    for (int v : adj[u]) out.walk(u, v) = step;
  }
  return out;
}

}  // namespace posethdx
