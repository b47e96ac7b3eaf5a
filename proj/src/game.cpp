#include "ssgman/game.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ssgman/lp.hpp"
#include "ssgman/rng.hpp"

namespace ssgman {

StrategyPolytope StrategyPolytope::budget_box(int n_targets, double budget) {
  if (n_targets <= 0) throw std::invalid_argument("budget_box: n_targets <= 0");
  if (budget < 0.0) throw std::invalid_argument("budget_box: negative budget");
  StrategyPolytope p;
  const int n = n_targets;
  p.A.setZero(2 * n + 1, n);
  p.b.setZero(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    p.A(i, i) = 1.0;        // x_i <= 1
    p.b(i) = 1.0;
    p.A(n + i, i) = -1.0;   // -x_i <= 0
    p.b(n + i) = 0.0;
  }
  p.A.row(2 * n).setOnes();  // sum x <= budget
  p.b(2 * n) = budget;
  p.form = PolytopeForm::BudgetBox;
  p.budget = budget;
  return p;
}

StrategyPolytope StrategyPolytope::general(Eigen::MatrixXd A,
                                           Eigen::VectorXd b) {
  if (A.rows() != b.size()) {
    throw std::invalid_argument("polytope: A rows != b size");
  }
  StrategyPolytope p;
  p.A = std::move(A);
  p.b = std::move(b);
  p.form = PolytopeForm::General;

  // Nonempty + bounded checks via LPs (cheap at this scale).
  InteriorPoint ip = find_interior_point(p.A, p.b);
  if (!ip.feasible) throw std::invalid_argument("polytope: empty feasible set");
  const int n = p.dim();
  for (int k = 0; k < n; ++k) {
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      c(k) = sgn;
      if (solve_lp(c, p.A, p.b).status == LpStatus::Unbounded) {
        throw std::invalid_argument("polytope: unbounded feasible set");
      }
    }
  }
  return p;
}

bool StrategyPolytope::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != A.cols()) return false;
  return ((A * x - b).array() <= tol).all();
}

void GameInstance::validate() const {
  if (n_targets <= 0) throw std::invalid_argument("game: n_targets <= 0");
  auto check_len = [&](const Eigen::VectorXd& v, const char* name) {
    if (v.size() != n_targets) {
      throw std::invalid_argument(std::string("game: bad length for ") + name);
    }
  };
  check_len(att_reward, "att_reward");
  check_len(att_penalty, "att_penalty");
  check_len(def_reward, "def_reward");
  check_len(def_penalty, "def_penalty");
  for (int n = 0; n < n_targets; ++n) {
    if (!(att_penalty(n) < att_reward(n)) || !(def_penalty(n) < def_reward(n))) {
      throw std::invalid_argument("game: penalty must be below reward");
    }
  }
  if (strategy_space.dim() != n_targets) {
    throw std::invalid_argument("game: strategy space dimension mismatch");
  }
  if (max_attacks_per_step <= 0) throw std::invalid_argument("game: K <= 0");
  if (horizon <= 0) throw std::invalid_argument("game: T <= 0");
}

double def_utility_at(const GameInstance& game, int n, double x_n) {
  if (n < 0 || n >= game.n_targets) {
    throw std::out_of_range("def_utility_at: target index");
  }
  return x_n * (game.def_reward(n) - game.def_penalty(n)) + game.def_penalty(n);
}

double att_utility_at(const GameInstance& game, int n, double x_n) {
  if (n < 0 || n >= game.n_targets) {
    throw std::out_of_range("att_utility_at: target index");
  }
  return x_n * (game.att_penalty(n) - game.att_reward(n)) + game.att_reward(n);
}

double att_step_utility(const GameInstance& game, const CoverageStrategy& x,
                        const Eigen::VectorXd& z) {
  if (x.x.size() != game.n_targets || z.size() != game.n_targets) {
    throw std::invalid_argument("att_step_utility: dimension mismatch");
  }
  double total = 0.0;
  for (int n = 0; n < game.n_targets; ++n) {
    total += z(n) * att_utility_at(game, n, x.x(n));
  }
  return total;
}

GameInstance generate_covariance_game(int n_targets, double r,
                                      std::uint64_t seed, double ratio,
                                      int max_attacks, int horizon) {
  if (r < -1.0 || r > 0.0) {
    throw std::invalid_argument("generate_covariance_game: r outside [-1, 0]");
  }
  if (ratio <= 0.0 || ratio > 1.0) {
    throw std::invalid_argument("generate_covariance_game: ratio outside (0, 1]");
  }
  Rng rng(Rng::derive(seed, 0xC0Fu));
  GameInstance g;
  g.n_targets = n_targets;
  g.att_reward.resize(n_targets);
  g.att_penalty.resize(n_targets);
  g.def_reward.resize(n_targets);
  g.def_penalty.resize(n_targets);
  const double w = -r;  // mixing weight toward the zero-sum pair
  for (int n = 0; n < n_targets; ++n) {
    double ra = rng.uniform(0.0, 10.0);
    double pa = rng.uniform(-10.0, 0.0);
    double rd_free = rng.uniform(0.0, 10.0);
    double pd_free = rng.uniform(-10.0, 0.0);
    double rd = w * (-pa) + (1.0 - w) * rd_free;
    double pd = w * (-ra) + (1.0 - w) * pd_free;
    g.att_reward(n) = ra;
    g.att_penalty(n) = pa;
    g.def_reward(n) = std::min(10.0, std::max(0.0, rd));
    g.def_penalty(n) = std::min(0.0, std::max(-10.0, pd));
  }
  double budget = std::ceil(ratio * n_targets);
  g.strategy_space = StrategyPolytope::budget_box(n_targets, budget);
  g.max_attacks_per_step = max_attacks;
  g.horizon = horizon;
  g.covariance_r = r;
  g.seed = seed;
  g.validate();
  return g;
}

SseSolution solve_sse(const GameInstance& game) {
  game.validate();
  const int n_targets = game.n_targets;
  const Eigen::MatrixXd& A = game.strategy_space.A;
  const Eigen::VectorXd& b = game.strategy_space.b;
  const int m = static_cast<int>(A.rows());

  SseSolution best;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int cand = 0; cand < n_targets; ++cand) {
    // maximize U^d_cand(x_cand) s.t. x in X and cand is a best response:
    // U^a_cand(x_cand) >= U^a_n(x_n) for all n.
    Eigen::MatrixXd G(m + n_targets - 1, n_targets);
    Eigen::VectorXd h(m + n_targets - 1);
    G.topRows(m) = A;
    h.head(m) = b;
    int row = m;
    for (int n = 0; n < n_targets; ++n) {
      if (n == cand) continue;
      // (P^a_n - R^a_n) x_n - (P^a_c - R^a_c) x_c <= R^a_c - R^a_n
      G.row(row).setZero();
      G(row, n) = game.att_penalty(n) - game.att_reward(n);
      G(row, cand) = -(game.att_penalty(cand) - game.att_reward(cand));
      h(row) = game.att_reward(cand) - game.att_reward(n);
      ++row;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_targets);
    c(cand) = -(game.def_reward(cand) - game.def_penalty(cand));  // maximize
    LpResult lp = solve_lp(c, G, h);
    if (lp.status != LpStatus::Optimal) continue;
    double u = def_utility_at(game, cand, lp.x(cand));
    if (u > best_u + 1e-12) {  // ties -> lowest candidate index
      best_u = u;
      best.x.x = lp.x;
      best.target = cand;
      best.def_utility = u;
      best.att_utility = att_utility_at(game, cand, lp.x(cand));
    }
  }
  if (best.target < 0) {
    throw std::runtime_error("solve_sse: no feasible candidate LP");
  }
  // Clean tiny LP round-off so downstream feasibility checks hold.
  for (int n = 0; n < n_targets; ++n) {
    best.x.x(n) = std::min(1.0, std::max(0.0, best.x.x(n)));
  }
  return best;
}

void to_json(nlohmann::json& j, const GameInstance& game) {
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  j = nlohmann::json{{"n_targets", game.n_targets},
                     {"horizon", game.horizon},
                     {"max_attacks", game.max_attacks_per_step},
                     {"att_reward", vec(game.att_reward)},
                     {"att_penalty", vec(game.att_penalty)},
                     {"def_reward", vec(game.def_reward)},
                     {"def_penalty", vec(game.def_penalty)},
                     {"budget", game.strategy_space.budget},
                     {"covariance_r", game.covariance_r},
                     {"seed", game.seed}};
}

void from_json(const nlohmann::json& j, GameInstance& game) {
  auto vec = [&](const char* key) {
    std::vector<double> v = j.at(key).get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<int>(v.size()))
        .eval();
  };
  game.n_targets = j.at("n_targets").get<int>();
  game.horizon = j.at("horizon").get<int>();
  game.max_attacks_per_step = j.at("max_attacks").get<int>();
  game.att_reward = vec("att_reward");
  game.att_penalty = vec("att_penalty");
  game.def_reward = vec("def_reward");
  game.def_penalty = vec("def_penalty");
  game.strategy_space = StrategyPolytope::budget_box(
      game.n_targets, j.at("budget").get<double>());
  game.covariance_r = j.value("covariance_r", 0.0);
  game.seed = j.value("seed", std::uint64_t{0});
  game.validate();
}

GameInstance load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  nlohmann::json j;
  in >> j;
  return j.get<GameInstance>();
}

void save_game(const GameInstance& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file: " + path);
  nlohmann::json j = game;
  out << j.dump(2) << "\n";
}

}  // namespace ssgman
