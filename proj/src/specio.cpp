#include "orecalc/specio.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "orecalc/freealg.hpp"

namespace orecalc::specio {

namespace {

Coords coords_from_json(const json& j) {
  Coords out;
  for (const auto& v : j) out.push_back(v.get<std::uint32_t>());
  return out;
}

std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& key) {
  const std::size_t comma = key.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("product key '" + key + "' is not of the form \"i,j\"");
  }
  return {std::stoul(key.substr(0, comma)), std::stoul(key.substr(comma + 1))};
}

json resolve_algebra_node(const json& node, const std::string& base_dir) {
  if (node.is_object() && node.contains("file")) {
    const std::filesystem::path p =
        std::filesystem::path(base_dir) / node.at("file").get<std::string>();
    return load_json_file(p.string()).data;
  }
  return node;
}

}  // namespace

LoadedFile load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return {json::parse(text), fnv1a64_hex(text)};
}

AlgebraPtr algebra_from_json(const json& j) {
  const std::uint32_t modulus = j.at("modulus").get<std::uint32_t>();
  std::vector<std::string> labels = j.at("basis").get<std::vector<std::string>>();
  const std::size_t dim = labels.size();
  std::vector<std::vector<Coords>> products(dim, std::vector<Coords>(dim, Coords(dim, 0)));
  if (j.contains("products")) {
    for (const auto& [key, value] : j.at("products").items()) {
      auto [a, b] = parse_index_pair(key);
      if (a >= dim || b >= dim) {
        throw std::invalid_argument("product key '" + key + "' is out of range");
      }
      products[a][b] = coords_from_json(value);
    }
  }
  std::optional<Coords> unit;
  if (j.contains("unit")) unit = coords_from_json(j.at("unit"));
  return FiniteAlgebra::create(modulus, std::move(labels), std::move(products),
                               std::move(unit));
}

ordered_json algebra_to_json(const FiniteAlgebra& a) {
  ordered_json out;
  out["modulus"] = a.modulus();
  out["basis"] = a.basis_labels();
  ordered_json products = ordered_json::object();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Coords& p = a.product_coords(i, j);
      if (std::any_of(p.begin(), p.end(), [](std::uint32_t x) { return x != 0; })) {
        products[std::to_string(i) + "," + std::to_string(j)] = p;
      }
    }
  }
  out["products"] = std::move(products);
  if (a.unital()) out["unit"] = a.unit().coords();
  return out;
}

Derivation derivation_from_json(const json& j, AlgebraPtr algebra) {
  const std::size_t dim = algebra->dim();
  const json& matrix = j.at("matrix");
  if (matrix.size() != dim) throw std::invalid_argument("derivation matrix: wrong row count");
  std::vector<Coords> images(dim, Coords(dim, 0));
  for (std::size_t t = 0; t < dim; ++t) {
    const json& row = matrix.at(t);
    if (row.size() != dim) throw std::invalid_argument("derivation matrix: wrong row length");
    for (std::size_t c = 0; c < dim; ++c) images[c][t] = row.at(c).get<std::uint32_t>();
  }
  if (auto w = leibniz_witness(images, *algebra)) {
    throw std::invalid_argument("derivation violates Leibniz at basis pair (" +
                                algebra->basis_labels()[w->first] + ", " +
                                algebra->basis_labels()[w->second] + ")");
  }
  return Derivation(std::move(algebra), std::move(images));
}

RawScenario scenario_from_json(const json& j, const std::string& base_dir) {
  RawScenario raw;
  raw.base = algebra_from_json(resolve_algebra_node(j.at("base"), base_dir));

  for (const json& level_node : j.at("levels")) {
    RawLevel level;
    // matrix[t][c] is the t-coordinate of the image of basis vector c; the
    // audit checks the shape, so the transform stays faithful to the file.
    const json& matrix = level_node.at("matrix");
    const std::size_t n_rows = matrix.size();
    std::size_t n_cols = 0;
    for (const json& row : matrix) n_cols = std::max(n_cols, row.size());
    std::vector<Coords> images(n_cols, Coords(n_rows, 0));
    for (std::size_t t = 0; t < n_rows; ++t) {
      const json& row = matrix.at(t);
      for (std::size_t c = 0; c < row.size(); ++c) {
        images[c][t] = row.at(c).get<std::uint32_t>();
      }
    }
    level.d_images = std::move(images);
    if (level_node.contains("var_images")) {
      for (const auto& [key, value] : level_node.at("var_images").items()) {
        const std::size_t var_1based = std::stoul(key);
        if (var_1based == 0) throw std::invalid_argument("variable numbers are 1-based");
        level.var_images[var_1based - 1] = coords_from_json(value);
      }
    }
    raw.levels.push_back(std::move(level));
  }

  if (j.contains("representation")) {
    const json& rep_node = j.at("representation");
    raw.rep = algebra_from_json(resolve_algebra_node(rep_node.at("algebra"), base_dir));
    for (const json& img : rep_node.at("embed")) raw.embed.push_back(coords_from_json(img));
  }
  if (j.contains("xs")) {
    for (const json& x : j.at("xs")) raw.xs.push_back(coords_from_json(x));
  }
  if (j.contains("coeffs")) {
    for (const auto& [key, value] : j.at("coeffs").items()) {
      std::vector<std::uint32_t> deg;
      std::size_t pos = 0;
      while (pos <= key.size()) {
        const std::size_t comma = key.find(',', pos);
        const std::string tok =
            comma == std::string::npos ? key.substr(pos) : key.substr(pos, comma - pos);
        deg.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      raw.coeffs[deg] = coords_from_json(value);
    }
  }
  if (j.contains("bounds")) raw.bounds = j.at("bounds").get<std::vector<unsigned>>();
  return raw;
}

TowerPtr tower_from_json(const json& j, const std::string& base_dir) {
  RawScenario raw = scenario_from_json(j, base_dir);
  TowerBuilder builder(raw.base);
  for (std::size_t i = 0; i < raw.levels.size(); ++i) {
    std::vector<AlgElem> var_images;
    for (std::size_t v = 0; v < i; ++v) {
      auto it = raw.levels[i].var_images.find(v);
      if (it == raw.levels[i].var_images.end()) {
        throw std::invalid_argument("tower level " + std::to_string(i + 1) +
                                    ": no image for X" + std::to_string(v + 1));
      }
      var_images.push_back(builder.hull()->elem(it->second));
    }
    builder.add_level(Derivation(builder.hull(), raw.levels[i].d_images),
                      std::move(var_images));
  }
  return builder.build();
}

ordered_json certificate_to_json(const ExpansionCertificate& cert) {
  ordered_json out;
  out["family"] = cert.family;
  out["exponents"] = cert.exponents;
  out["order"] = cert.order;
  ordered_json terms = ordered_json::array();
  for (const CertTerm& t : cert.terms) {
    ordered_json term;
    term["key"] = t.key;
    term["coeff"] = t.coeff.str();
    terms.push_back(std::move(term));
  }
  out["terms"] = std::move(terms);
  out["verified"] = cert.verified;
  if (cert.family == 6) out["unique"] = cert.unique;
  out["difference_hash"] = cert.difference_hash;
  return out;
}

}  // namespace orecalc::specio
