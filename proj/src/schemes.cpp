#include "vlcee/schemes.hpp"

#include <algorithm>
#include <numeric>

namespace vlcee {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::pscom_rsma: return "pscom-rsma";
    case Scheme::pscom_sdma: return "pscom-sdma";
    case Scheme::pscom_noma: return "pscom-noma";
    case Scheme::conventional_rsma: return "conventional-rsma";
  }
  return "?";
}

Scheme parse_scheme(const std::string& tag) {
  if (tag == "pscom-rsma") return Scheme::pscom_rsma;
  if (tag == "pscom-sdma") return Scheme::pscom_sdma;
  if (tag == "pscom-noma") return Scheme::pscom_noma;
  if (tag == "conventional-rsma") return Scheme::conventional_rsma;
  throw ValidationError("unknown scheme tag '" + tag + "'");
}

std::vector<int> noma_decode_order(const ChannelMatrix& H) {
  std::vector<int> order(H.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return H.row(a).norm() < H.row(b).norm();
  });
  return order;
}

RateModel make_rate_model(Scheme scheme, const ChannelMatrix& H,
                          bool conventional_keep_knowledge) {
  const int K = static_cast<int>(H.rows());
  const int N = static_cast<int>(H.cols());
  switch (scheme) {
    case Scheme::pscom_rsma:
      return rsma_rate_model(K, N);
    case Scheme::conventional_rsma: {
      RateModel m = rsma_rate_model(K, N);
      m.has_knowledge_stream = conventional_keep_knowledge;
      return m;
    }
    case Scheme::pscom_sdma: {
      RateModel m;
      m.num_users = K;
      m.num_leds = N;
      m.has_common = false;
      m.has_knowledge_stream = false;
      m.knowledge_unicast = true;
      for (int k = 0; k < K; ++k) m.active_beams.push_back(k + 1);
      m.privates.resize(K);
      for (int k = 0; k < K; ++k) {
        SinrCert c;
        c.beam = k + 1;
        c.observer = k;
        for (int l = 0; l < K; ++l)
          if (l != k) c.interferers.push_back(l + 1);
        m.privates[k].certs = {c};
      }
      return m;
    }
    case Scheme::pscom_noma: {
      RateModel m;
      m.num_users = K;
      m.num_leds = N;
      m.has_common = false;
      m.has_knowledge_stream = false;
      m.knowledge_unicast = true;
      for (int k = 0; k < K; ++k) m.active_beams.push_back(k + 1);
      m.privates.resize(K);
      const std::vector<int> order = noma_decode_order(H);
      for (int p = 0; p < K; ++p) {
        const int user = order[p];
        std::vector<int> later;
        for (int q = p + 1; q < K; ++q) later.push_back(order[q] + 1);
        // The stream decoded at position p must be decoded (and cancelled) by
        // every user from position p onward; interference is what remains.
        for (int q = p; q < K; ++q) {
          SinrCert c;
          c.beam = user + 1;
          c.observer = order[q];
          c.interferers = later;
          m.privates[user].certs.push_back(c);
        }
      }
      return m;
    }
  }
  throw std::logic_error("unreachable scheme");
}

SolveOutput solve_scheme(const NetworkConfig& cfg, Scheme scheme) {
  if (scheme == Scheme::pscom_rsma) return solve(cfg);
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);
  const RateModel model = make_rate_model(scheme, H, cfg.conventional_keep_knowledge);
  const bool optimize_rho = scheme != Scheme::conventional_rsma;
  return solve_model(cfg, model, optimize_rho);
}

EvalReport evaluate_scheme(const NetworkConfig& cfg, Scheme scheme, const Design& design) {
  const ChannelMatrix H = build_channel_matrix(cfg.scene, cfg.optical);
  const RateModel model = make_rate_model(scheme, H, cfg.conventional_keep_knowledge);
  return evaluate_model(model, design, H, cfg.qos, cfg.profiles, cfg.eta);
}

}  // namespace vlcee
