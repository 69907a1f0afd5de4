#include "awopt/agents/networks.hpp"

#include <cmath>

#include "awopt/errors.hpp"

namespace awopt::agents {
namespace {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void softmax_into(const double* logits, std::size_t n, std::vector<double>& out) {
  double max_logit = logits[0];
  for (std::size_t i = 1; i < n; ++i) max_logit = std::max(max_logit, logits[i]);
  out.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
}

}  // namespace

std::size_t ActorNet::head_dim() const {
  std::size_t dim = 2 * spec.continuous_dims();
  for (const auto& d : spec.discrete) dim += d.cardinality;
  return dim;
}

action::ActorDistribution ActorNet::distribution(const std::vector<double>& observation) const {
  return distribution_from_raw(nn::forward(params, observation));
}

action::ActorDistribution ActorNet::distribution_from_raw(const std::vector<double>& raw) const {
  const std::size_t n_cont = spec.continuous_dims();

  action::ActorDistribution dist;
  dist.mean.assign(raw.begin(), raw.begin() + n_cont);
  dist.variance.resize(n_cont);
  for (std::size_t k = 0; k < n_cont; ++k) {
    dist.variance[k] = softplus(raw[n_cont + k]) + variance_floor;
  }
  std::size_t offset = 2 * n_cont;
  dist.discrete_probs.resize(spec.discrete_dims());
  for (std::size_t d = 0; d < spec.discrete_dims(); ++d) {
    const std::size_t card = spec.discrete[d].cardinality;
    softmax_into(raw.data() + offset, card, dist.discrete_probs[d]);
    offset += card;
  }
  return dist;
}

std::vector<double> ActorNet::head_grad_to_raw(const std::vector<double>& raw,
                                               const action::ActorLossGrad& grad) const {
  const std::size_t n_cont = spec.continuous_dims();
  std::vector<double> d_raw(raw.size(), 0.0);
  for (std::size_t k = 0; k < n_cont; ++k) {
    d_raw[k] = grad.d_mean[k];
    d_raw[n_cont + k] = grad.d_variance[k] * sigmoid(raw[n_cont + k]);
  }
  std::size_t offset = 2 * n_cont;
  for (std::size_t d = 0; d < spec.discrete_dims(); ++d) {
    const std::size_t card = spec.discrete[d].cardinality;
    std::vector<double> probs;
    softmax_into(raw.data() + offset, card, probs);
    const auto& gp = grad.d_discrete_probs[d];
    double dot = 0.0;
    for (std::size_t j = 0; j < card; ++j) dot += gp[j] * probs[j];
    for (std::size_t j = 0; j < card; ++j) {
      d_raw[offset + j] = probs[j] * (gp[j] - dot);
    }
    offset += card;
  }
  return d_raw;
}

ActorNet make_actor_net(std::size_t observation_dim, const action::ActionSpec& spec,
                        const std::vector<std::size_t>& hidden, Rng& rng) {
  spec.validate();
  ActorNet actor;
  actor.spec = spec;
  actor.params = nn::make_mlp(observation_dim, hidden, actor.head_dim(), rng);
  // The imitation loss carries no variance term, so the raw-variance heads
  // keep their initial scale; start them low for modest exploration noise.
  const std::size_t n_cont = spec.continuous_dims();
  nn::Layer& out = actor.params.layers.back();
  for (std::size_t k = 0; k < n_cont; ++k) out.bias[n_cont + k] = -4.0;
  return actor;
}

std::vector<double> CriticNets::encode(const std::vector<double>& observation,
                                       const action::MixedAction& action) const {
  std::vector<double> input;
  input.reserve(observation.size() + spec.encoded_dim());
  input.insert(input.end(), observation.begin(), observation.end());
  input.insert(input.end(), action.continuous.begin(), action.continuous.end());
  for (std::size_t d = 0; d < spec.discrete_dims(); ++d) {
    for (std::uint32_t j = 0; j < spec.discrete[d].cardinality; ++j) {
      input.push_back(action.discrete[d] == j ? 1.0 : 0.0);
    }
  }
  return input;
}

double CriticNets::q_online(const std::vector<double>& observation,
                            const action::MixedAction& action) const {
  return nn::forward(online, encode(observation, action))[0];
}

double CriticNets::q_target(const std::vector<double>& observation,
                            const action::MixedAction& action) const {
  return nn::forward(target, encode(observation, action))[0];
}

namespace {

std::vector<double> q_batch(const nn::MlpParams& net, const CriticNets& critic,
                            const std::vector<double>& observation,
                            const std::vector<action::MixedAction>& actions) {
  nn::Matrix inputs(actions.size(), net.input_dim());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::vector<double> row = critic.encode(observation, actions[i]);
    std::copy(row.begin(), row.end(), inputs.row(i));
  }
  const nn::Matrix out = nn::forward_batch(net, inputs);
  std::vector<double> values(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) values[i] = out(i, 0);
  return values;
}

}  // namespace

std::vector<double> CriticNets::q_target_batch(
    const std::vector<double>& observation,
    const std::vector<action::MixedAction>& actions) const {
  return q_batch(target, *this, observation, actions);
}

std::vector<double> CriticNets::q_online_batch(
    const std::vector<double>& observation,
    const std::vector<action::MixedAction>& actions) const {
  return q_batch(online, *this, observation, actions);
}

void CriticNets::polyak_update() {
  for (std::size_t k = 0; k < online.layers.size(); ++k) {
    auto& tw = target.layers[k].weight.values();
    const auto& ow = online.layers[k].weight.values();
    for (std::size_t i = 0; i < tw.size(); ++i) {
      tw[i] = tau * ow[i] + (1.0 - tau) * tw[i];
    }
    auto& tb = target.layers[k].bias;
    const auto& ob = online.layers[k].bias;
    for (std::size_t i = 0; i < tb.size(); ++i) {
      tb[i] = tau * ob[i] + (1.0 - tau) * tb[i];
    }
  }
}

CriticNets make_critic_nets(std::size_t observation_dim, const action::ActionSpec& spec,
                            const std::vector<std::size_t>& hidden, double tau, Rng& rng) {
  spec.validate();
  CriticNets critic;
  critic.spec = spec;
  critic.tau = tau;
  critic.online = nn::make_mlp(observation_dim + spec.encoded_dim(), hidden, 1, rng);
  critic.target = critic.online;
  return critic;
}

}  // namespace awopt::agents
