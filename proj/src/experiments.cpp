#include "qcorners/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qcorners/errors.hpp"
#include "qcorners/rng.hpp"
#include "qcorners/spectral.hpp"

namespace qcorners {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::size_t parse_size(std::string_view s, std::string_view what) {
  std::size_t pos = 0;
  const std::string str(s);
  unsigned long long v = 0;
  try {
    v = std::stoull(str, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (str.empty() || pos != str.size() || str.front() == '-')
    throw InputError("bad number '" + str + "' in " + std::string(what));
  return static_cast<std::size_t>(v);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string SubsetSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::random_density:
      os << "random(delta=" << format_double(delta) << ")";
      break;
    case Kind::interval:
      if (explicit_interval)
        os << "interval:" << lo << ':' << hi;
      else
        os << "interval(delta=" << format_double(delta) << ")";
      break;
    case Kind::product:
      os << "product:";
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if (s) os << '/';
        for (std::size_t i = 0; i < sets[s].size(); ++i) os << (i ? "," : "") << sets[s][i];
      }
      break;
    case Kind::planted_corners:
      os << "planted:" << planted << "(delta=" << format_double(delta) << ")";
      break;
  }
  return os.str();
}

SubsetSpec parse_subset_spec(std::string_view text, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
  SubsetSpec spec;
  spec.delta = delta;
  const auto parts = split(text, ':');
  const auto kind = parts.front();
  if (kind == "random") {
    if (parts.size() != 1) throw InputError("random takes no arguments (use --delta)");
    spec.kind = SubsetSpec::Kind::random_density;
  } else if (kind == "interval") {
    spec.kind = SubsetSpec::Kind::interval;
    if (parts.size() == 3) {
      spec.explicit_interval = true;
      spec.lo = parse_size(parts[1], "interval");
      spec.hi = parse_size(parts[2], "interval");
      if (spec.lo > spec.hi) throw InputError("interval needs lo <= hi");
    } else if (parts.size() != 1) {
      throw InputError("interval spec is 'interval' or 'interval:lo:hi'");
    }
  } else if (kind == "product") {
    spec.kind = SubsetSpec::Kind::product;
    if (parts.size() != 2) throw InputError("product spec is 'product:S1/S2/...'");
    for (auto set_text : split(parts[1], '/')) {
      std::vector<ElementId> set;
      if (!set_text.empty())
        for (auto item : split(set_text, ',')) set.push_back(static_cast<ElementId>(parse_size(item, "product")));
      spec.sets.push_back(std::move(set));
    }
  } else if (kind == "planted") {
    spec.kind = SubsetSpec::Kind::planted_corners;
    if (parts.size() != 2) throw InputError("planted spec is 'planted:m'");
    spec.planted = parse_size(parts[1], "planted");
  } else {
    throw InputError("unknown subset kind '" + std::string(kind) + "'");
  }
  return spec;
}

namespace {

void fill_random(SubsetK& out, double delta, Rng& rng) {
  const std::size_t universe = out.universe();
  const auto target = static_cast<std::size_t>(std::llround(delta * static_cast<double>(universe)));
  // Partial Fisher-Yates over all indices.
  std::vector<std::uint32_t> idx(universe);
  std::iota(idx.begin(), idx.end(), 0U);
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(universe - i));
    std::swap(idx[i], idx[j]);
    out.insert(idx[i]);
  }
}

}  // namespace

SubsetK generate_subset(const Group& g, std::size_t k, const SubsetSpec& spec, std::uint64_t seed) {
  if (k == 0) throw InputError("dimension k must be at least 1");
  const std::size_t n = g.order();
  checked_power(n, k, std::size_t{1} << 32);
  SubsetK out(n, k);
  Rng rng(seed);

  auto fill_product = [&](const std::vector<std::vector<ElementId>>& sets) {
    std::vector<std::size_t> pos(k, 0);
    for (const auto& s : sets)
      if (s.empty()) return;
    PointK p(k);
    while (true) {
      for (std::size_t m = 0; m < k; ++m) p[m] = sets[m][pos[m]];
      out.insert(p);
      std::size_t m = k;
      while (m-- > 0) {
        if (++pos[m] < sets[m].size()) break;
        pos[m] = 0;
      }
      if (m == static_cast<std::size_t>(-1)) return;
    }
  };

  switch (spec.kind) {
    case SubsetSpec::Kind::random_density:
      fill_random(out, spec.delta, rng);
      break;
    case SubsetSpec::Kind::interval: {
      std::size_t lo = spec.lo, hi = spec.hi;
      if (!spec.explicit_interval) {
        lo = 0;
        hi = static_cast<std::size_t>(
            std::llround(std::pow(spec.delta, 1.0 / static_cast<double>(k)) * static_cast<double>(n)));
      }
      if (hi > n) throw InputError("interval end exceeds group order");
      std::vector<ElementId> range(hi - lo);
      std::iota(range.begin(), range.end(), static_cast<ElementId>(lo));
      fill_product(std::vector<std::vector<ElementId>>(k, range));
      break;
    }
    case SubsetSpec::Kind::product: {
      auto sets = spec.sets;
      if (sets.size() == 1) sets.assign(k, sets.front());
      if (sets.size() != k) throw InputError("product spec needs 1 or k coordinate sets");
      for (auto& s : sets) {
        std::set<ElementId> uniq(s.begin(), s.end());
        if (!uniq.empty() && *uniq.rbegin() >= n) throw InputError("product set element out of range");
        s.assign(uniq.begin(), uniq.end());
      }
      fill_product(sets);
      break;
    }
    case SubsetSpec::Kind::planted_corners: {
      if (spec.planted > 0 && n < 2) throw InputError("planted corners need |G| >= 2");
      const std::size_t possible = (n - 1) * checked_power(n, k);
      if (spec.planted > possible) throw InputError("more planted corners than distinct (g,a) pairs");
      fill_random(out, spec.delta, rng);
      std::set<std::pair<ElementId, std::size_t>> used;
      while (used.size() < spec.planted) {
        auto h = static_cast<ElementId>(rng.below(n - 1));
        if (h >= g.identity()) ++h;  // skip the identity
        const auto base = static_cast<std::size_t>(rng.below(out.universe()));
        if (!used.emplace(h, base).second) continue;
        for (const auto& p : corner_config(g, h, unravel(base, n, k))) out.insert(p);
      }
      break;
    }
  }
  return out;
}

std::string ThetaRule::to_string() const {
  return relative_to_mean ? "mean*" + format_double(value) : format_double(value);
}

ThetaRule parse_theta_rule(std::string_view text) {
  ThetaRule r;
  const std::string s(text);
  auto number = [&](const std::string& t) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != t.size() || !(v >= 0)) throw InputError("bad theta '" + s + "'");
    return v;
  };
  if (s == "mean") {
    r = {true, 1.0};
  } else if (s.starts_with("mean/")) {
    const double d = number(s.substr(5));
    if (d == 0) throw InputError("theta divisor must be positive");
    r = {true, 1.0 / d};
  } else if (s.starts_with("mean*")) {
    r = {true, number(s.substr(5))};
  } else {
    r = {false, number(s)};
  }
  return r;
}

CornerRun run_corners(const Group& g, std::size_t k, const SubsetSpec& spec, const ThetaRule& theta,
                      std::uint64_t seed, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  check_enumeration_cap(g, k);
  CornerRun run;
  auto& r = run.report;
  r.group = g.label();
  r.order = g.order();
  r.D = quasirandomness_degree(g);
  r.k = k;
  r.subset = spec.to_string();
  r.seed = seed;
  r.subset_seed = derive_seed(seed, g.label());
  const SubsetK a = generate_subset(g, k, spec, r.subset_seed);
  r.density = a.density();
  run.stats = corner_stats(g, a, workers);
  r.mean = run.stats.series.mean;
  r.tv = run.stats.series.tv;
  r.theta = theta.resolve(r.mean);
  r.good_fraction = good_fraction(run.stats.series, r.theta);
  r.count = run.stats.total;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::vector<ExperimentReport> tv_scan(const std::vector<std::string>& family, std::size_t k,
                                      const SubsetSpec& spec, const ThetaRule& theta, std::uint64_t seed,
                                      unsigned workers) {
  std::vector<ExperimentReport> rows(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    try {
      rows[i] = run_corners(parse_group(family[i]), k, spec, theta, seed, 1).report;
    } catch (const std::exception& e) {
      rows[i] = ExperimentReport{};
      rows[i].group = family[i];
      rows[i].k = k;
      rows[i].subset = spec.to_string();
      rows[i].seed = seed;
      rows[i].error = e.what();
    }
  });
  return rows;
}

std::string series_csv(const CorrelationSeries& s) {
  std::string out = "g_index,c_g\n";
  for (std::size_t g = 0; g < s.values.size(); ++g) out += std::to_string(g) + ',' + format_double(s.values[g]) + '\n';
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + '"';
}

}  // namespace

std::string reports_csv(const std::vector<ExperimentReport>& rows, bool with_timing) {
  std::string out = "group,order,D,k,subset,seed,density,mean,tv,theta,good_fraction,count,error";
  out += with_timing ? ",wall_seconds\n" : "\n";
  for (const auto& r : rows) {
    out += csv_field(r.group) + ',' + std::to_string(r.order) + ',' + std::to_string(r.D) + ',' +
           std::to_string(r.k) + ',' + csv_field(r.subset) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.density) + ',' + format_double(r.mean) + ',' + format_double(r.tv) + ',' +
           format_double(r.theta) + ',' + format_double(r.good_fraction) + ',' + std::to_string(r.count) + ',' +
           csv_field(r.error);
    if (with_timing) out += ',' + format_double(r.wall_seconds);
    out += '\n';
  }
  return out;
}

std::string report_json(const ExperimentReport& r, bool with_timing) {
  nlohmann::ordered_json j;
  j["group"] = r.group;
  j["order"] = r.order;
  j["D"] = r.D;
  j["k"] = r.k;
  j["subset"] = r.subset;
  j["seed"] = r.seed;
  j["subset_seed"] = r.subset_seed;
  j["density"] = r.density;
  j["mean"] = r.mean;
  j["tv"] = r.tv;
  j["theta"] = r.theta;
  j["good_fraction"] = r.good_fraction;
  j["count"] = r.count;
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2);
}

}  // namespace qcorners
