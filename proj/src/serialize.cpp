#include "l1bench/serialize.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "instance files store raw little-endian doubles");

namespace l1bench {

using nlohmann::json;

namespace {

json stage_to_json(const RotationStage& st) {
  json j;
  if (st.kind == RotationStage::Kind::paired) {
    j["kind"] = "paired";
    j["offset"] = st.offset;
    j["theta"] = st.theta;
  } else {
    j["kind"] = "explicit";
    json rots = json::array();
    for (const auto& r : st.rotations) rots.push_back({r.i, r.j, r.theta});
    j["rotations"] = std::move(rots);
  }
  return j;
}

RotationStage stage_from_json(const json& j, std::size_t n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "paired") {
    return RotationStage::paired(n, j.at("offset").get<int>(), j.at("theta").get<double>());
  }
  if (kind == "explicit") {
    std::vector<GivensRotation> rots;
    for (const auto& r : j.at("rotations")) {
      rots.push_back({r.at(0).get<std::uint32_t>(), r.at(1).get<std::uint32_t>(),
                      r.at(2).get<double>()});
    }
    return RotationStage::explicit_list(n, std::move(rots));
  }
  throw std::invalid_argument("stage_from_json: unknown stage kind '" + kind + "'");
}

json perm_to_json(const Permutation& p) {
  json j;
  switch (p.kind) {
    case Permutation::Kind::identity:
      j["kind"] = "identity";
      break;
    case Permutation::Kind::seeded:
      j["kind"] = "seeded";
      j["seed"] = p.seed;
      break;
    case Permutation::Kind::explicit_list:
      j["kind"] = "explicit";
      j["map"] = p.map();
      break;
  }
  return j;
}

Permutation perm_from_json(const json& j, std::size_t n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return Permutation::identity(n);
  if (kind == "seeded") return Permutation::random(n, j.at("seed").get<std::uint64_t>());
  if (kind == "explicit") {
    return Permutation::from_indices(j.at("map").get<std::vector<std::uint32_t>>());
  }
  throw std::invalid_argument("perm_from_json: unknown permutation kind '" + kind + "'");
}

json spectrum_to_json(const Spectrum& s) {
  json j;
  switch (s.kind) {
    case Spectrum::Kind::explicit_values:
      j["kind"] = "explicit";
      j["values"] = s.values();
      break;
    case Spectrum::Kind::uniform:
      j["kind"] = "uniform";
      j["lo"] = s.lo;
      j["hi"] = s.hi;
      j["shift"] = s.shift;
      j["seed"] = s.seed;
      if (s.realized()) j["values"] = s.values();  // bit-exact replay
      break;
    case Spectrum::Kind::alternating:
      j["kind"] = "alternating";
      j["odd"] = s.odd_value;
      j["even"] = s.even_value;
      break;
  }
  return j;
}

Spectrum spectrum_from_json(const json& j, std::size_t n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != n) throw std::invalid_argument("spectrum_from_json: value count mismatch");
    return Spectrum::from_values(std::move(values));
  }
  if (kind == "uniform") {
    Spectrum s = Spectrum::uniform(n, j.at("lo").get<double>(), j.at("hi").get<double>(),
                                   j.at("shift").get<double>(), j.at("seed").get<std::uint64_t>());
    if (j.contains("values")) s.set_realized(j.at("values").get<std::vector<double>>());
    return s;
  }
  if (kind == "alternating") {
    return Spectrum::alternating(n, j.at("odd").get<double>(), j.at("even").get<double>());
  }
  throw std::invalid_argument("spectrum_from_json: unknown spectrum kind '" + kind + "'");
}

constexpr char kMagic[8] = {'L', '1', 'B', 'I', 'N', 'S', 'T', '\x01'};

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_doubles(std::ostream& os, std::span<const double> v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::istream& is, std::span<double> v) {
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

json spec_to_json(const OperatorSpec& spec) {
  json j;
  j["version"] = 1;
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["spectrum"] = spectrum_to_json(spec.spectrum);
  json right = json::array();
  for (const auto& st : spec.right_stages) right.push_back(stage_to_json(st));
  j["right_stages"] = std::move(right);
  json left = json::array();
  for (const auto& st : spec.left_stages) left.push_back(stage_to_json(st));
  j["left_stages"] = std::move(left);
  j["p1"] = perm_to_json(spec.p1);
  j["p2"] = perm_to_json(spec.p2);
  return j;
}

OperatorSpec spec_from_json(const json& j) {
  OperatorSpec spec;
  spec.m = j.at("m").get<std::size_t>();
  spec.n = j.at("n").get<std::size_t>();
  spec.spectrum = spectrum_from_json(j.at("spectrum"), spec.n);
  for (const auto& st : j.at("right_stages")) {
    spec.right_stages.push_back(stage_from_json(st, spec.n));
  }
  for (const auto& st : j.at("left_stages")) {
    spec.left_stages.push_back(stage_from_json(st, spec.m));
  }
  spec.p1 = perm_from_json(j.at("p1"), spec.m);
  spec.p2 = perm_from_json(j.at("p2"), spec.m);
  spec.finalize();
  return spec;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  json header;
  header["version"] = 1;
  header["kind"] = inst.is_wide() ? "wide" : "tall";
  header["m"] = inst.rows();
  header["n"] = inst.cols();
  header["tau"] = inst.tau;
  header["noise_norm"] = inst.noise_norm;
  header["cert_kappa"] = inst.cert_kappa;
  header["x_nnz"] = inst.x_star.nnz();
  header["op"] = spec_to_json(*inst.factored);
  if (inst.is_wide()) header["ext_cols"] = inst.wide->ext().cols;
  if (inst.conditioning) {
    json c;
    c["kappa_gram"] = inst.conditioning->kappa_gram;
    c["rho"] = inst.conditioning->rho;
    if (std::isfinite(inst.conditioning->kappa_solution)) {
      c["kappa_solution"] = inst.conditioning->kappa_solution;
    } else {
      c["kappa_solution"] = nullptr;
    }
    header["conditioning"] = std::move(c);
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_instance: cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  const std::string head = header.dump();
  write_u64(os, head.size());
  os.write(head.data(), static_cast<std::streamsize>(head.size()));
  write_doubles(os, inst.b);
  for (std::size_t k = 0; k < inst.x_star.nnz(); ++k) {
    write_u64(os, inst.x_star.support[k]);
    write_doubles(os, {&inst.x_star.values[k], 1});
  }
  if (inst.is_wide()) write_doubles(os, inst.wide->ext().data);
  if (!os) throw std::runtime_error("save_instance: write failed for '" + path + "'");
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_instance: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("load_instance: '" + path + "' is not an instance file");
  }
  const std::uint64_t head_len = read_u64(is);
  std::string head(head_len, '\0');
  is.read(head.data(), static_cast<std::streamsize>(head_len));
  const json header = json::parse(head);

  const std::string kind = header.at("kind").get<std::string>();
  const std::size_t m = header.at("m").get<std::size_t>();
  const std::size_t n = header.at("n").get<std::size_t>();

  ProblemInstance inst;
  inst.tau = header.at("tau").get<double>();
  inst.noise_norm = header.at("noise_norm").get<double>();
  inst.cert_kappa = header.at("cert_kappa").get<double>();

  OperatorSpec spec = spec_from_json(header.at("op"));

  inst.b.resize(m);
  read_doubles(is, inst.b);

  const std::size_t s = header.at("x_nnz").get<std::size_t>();
  inst.x_star.n = n;
  inst.x_star.support.resize(s);
  inst.x_star.values.resize(s);
  for (std::size_t k = 0; k < s; ++k) {
    inst.x_star.support[k] = static_cast<std::uint32_t>(read_u64(is));
    read_doubles(is, {&inst.x_star.values[k], 1});
  }

  if (kind == "wide") {
    const std::size_t ext_cols = header.at("ext_cols").get<std::size_t>();
    DenseMatrix ext(m, ext_cols);
    read_doubles(is, ext.data);
    auto block = std::make_shared<BlockOperator>(std::move(spec), std::move(ext));
    inst.factored = std::shared_ptr<const OperatorSpec>(block, &block->base());
    inst.wide = std::move(block);
  } else {
    inst.factored = std::make_shared<const OperatorSpec>(std::move(spec));
  }

  if (header.contains("conditioning")) {
    const auto& c = header.at("conditioning");
    ConditioningReport rep;
    rep.kappa_gram = c.at("kappa_gram").get<double>();
    rep.rho = c.at("rho").get<double>();
    rep.kappa_solution = c.at("kappa_solution").is_null()
                             ? std::numeric_limits<double>::infinity()
                             : c.at("kappa_solution").get<double>();
    inst.conditioning = rep;
  }
  if (!is) throw std::runtime_error("load_instance: truncated file '" + path + "'");
  inst.x_star.validate();
  return inst;
}

void write_trace_csv(const SolverTrace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_trace_csv: cannot open '" + path + "'");
  os << "solver,iter,elapsed_s,objective,nnz_x,matvecs,extra\n";
  char line[256];
  for (const auto& s : trace.samples) {
    std::snprintf(line, sizeof(line), "%s,%zu,%.6f,%.17g,%zu,%.3f,%zu\n", trace.solver.c_str(),
                  s.iter, s.elapsed_s, s.objective, s.nnz, s.matvecs, s.extra);
    os << line;
  }
  if (!os) throw std::runtime_error("write_trace_csv: write failed for '" + path + "'");
}

}  // namespace l1bench
