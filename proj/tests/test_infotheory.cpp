#include <doctest.h>

#include <cmath>

#include "rhythmkit/errors.hpp"
#include "rhythmkit/infotheory.hpp"
#include "rhythmkit/resampler.hpp"

using namespace rhythmkit;

namespace {

Channel identity_channel() {
  return [](const Seq& x) {
    OutcomeDist dist;
    dist.outcomes.push_back(x);
    dist.probs.push_back(1.0);
    return dist;
  };
}

Channel constant_channel() {
  return [](const Seq&) {
    OutcomeDist dist;
    dist.outcomes.push_back({0});
    dist.probs.push_back(1.0);
    return dist;
  };
}

Channel collapse_channel() {
  return [](const Seq& x) {
    OutcomeDist dist;
    dist.outcomes.push_back(collapse_runs(x));
    dist.probs.push_back(1.0);
    return dist;
  };
}

/// One content vector (0, 1) with rhythm (1,2) or (2,1), uniform.
DiscreteEnsemble two_phone_ensemble(Channel channel) {
  DiscreteEnsemble ens;
  ens.joint_sr.push_back({{0, 1}, {1, 2}, 0.5});
  ens.joint_sr.push_back({{0, 1}, {2, 1}, 0.5});
  ens.channel = std::move(channel);
  return ens;
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy({0.25, 0.75}) == doctest::Approx(0.8112781245).epsilon(1e-9));
  CHECK_THROWS_AS(entropy({-0.2, 1.2}), InvalidPmf);

  DiscretePmf pmf;
  pmf.support = {"a", "b"};
  pmf.probs = {0.3, 0.3};
  CHECK_THROWS_AS(entropy(pmf), InvalidPmf);
}

TEST_CASE("mutual_information") {
  SUBCASE("independent uniform bits") {
    JointPmf joint;
    joint.row_support = {"0", "1"};
    joint.col_support = {"0", "1"};
    joint.p.resize(2, 2);
    joint.p << 0.25, 0.25, 0.25, 0.25;
    CHECK(mutual_information(joint) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("identical pair over four outcomes carries two bits") {
    JointPmf joint;
    joint.row_support = {"0", "1", "2", "3"};
    joint.col_support = {"0", "1", "2", "3"};
    joint.p = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) joint.p(i, i) = 0.25;
    CHECK(mutual_information(joint) == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("binary symmetric channel at flip 0.1") {
    JointPmf joint;
    joint.row_support = {"0", "1"};
    joint.col_support = {"0", "1"};
    joint.p.resize(2, 2);
    joint.p << 0.45, 0.05, 0.05, 0.45;
    CHECK(mutual_information(joint) == doctest::Approx(0.5310044).epsilon(1e-7));
  }
}

TEST_CASE("push_channel") {
  SUBCASE("identity channel keeps all rhythm information") {
    const DiscreteEnsemble ens = two_phone_ensemble(identity_channel());
    const double i_rz = mutual_information(push_channel(ens));
    const double i_rx = mutual_information(joint_r_x(ens));
    CHECK(i_rz == doctest::Approx(1.0).epsilon(1e-12));  // H(R) = 1 bit
    CHECK(i_rz == doctest::Approx(i_rx).epsilon(1e-12));
  }

  SUBCASE("constant channel removes all rhythm information") {
    const DiscreteEnsemble ens = two_phone_ensemble(constant_channel());
    CHECK(mutual_information(push_channel(ens)) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("run collapse on the two-phone ensemble: I(R;Z)=0 while I(R;X)=1") {
    const DiscreteEnsemble ens = two_phone_ensemble(collapse_channel());
    CHECK(mutual_information(push_channel(ens)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mutual_information(joint_r_x(ens)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("repeat_expand and collapse_runs invert each other") {
  const Seq s{0, 2, 1};
  const Seq r{2, 1, 3};
  const Seq x = repeat_expand(s, r);
  CHECK(x == Seq{0, 0, 2, 1, 1, 1});
  CHECK(collapse_runs(x) == s);
}

TEST_CASE("verify_theorem1") {
  SUBCASE("identity channel passes with both sides H(R)") {
    const TheoremReport report = verify_theorem1(two_phone_ensemble(identity_channel()));
    CHECK(report.pass);
    CHECK(report.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.rhs == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("injective relabeling passes") {
    // X values map to fresh distinct tokens; a bijection preserves MI.
    Channel relabel = [](const Seq& x) {
      OutcomeDist dist;
      int token = 7;
      for (int v : x) token = token * 31 + v + 1;
      dist.outcomes.push_back({token});
      dist.probs.push_back(1.0);
      return dist;
    };
    const TheoremReport report = verify_theorem1(two_phone_ensemble(std::move(relabel)));
    CHECK(report.pass);
  }

  SUBCASE("merging two same-S inputs violates the hypothesis") {
    CHECK_THROWS_AS(verify_theorem1(two_phone_ensemble(constant_channel())), HypothesisViolated);
  }
}

TEST_CASE("verify_theorem2") {
  SUBCASE("run collapse with S-independent R: both sides zero") {
    const TheoremReport report = verify_theorem2(two_phone_ensemble(collapse_channel()));
    CHECK(report.pass);
    CHECK(report.lhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.rhs == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("correlated joint: both sides equal I(R;S) > 0") {
    DiscreteEnsemble ens;
    ens.joint_sr.push_back({{0, 1}, {1, 2}, 0.5});
    ens.joint_sr.push_back({{1, 0}, {2, 1}, 0.5});
    ens.channel = collapse_channel();
    const TheoremReport report = verify_theorem2(ens);
    CHECK(report.pass);
    CHECK(report.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.rhs == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("identity channel with several rhythms violates the hypothesis") {
    CHECK_THROWS_AS(verify_theorem2(two_phone_ensemble(identity_channel())), HypothesisViolated);
  }
}

TEST_CASE("randomized ensembles: theorems and data processing inequality") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    {
      Rng rng(seed);
      const DiscreteEnsemble ens = random_split_ensemble(rng);
      const TheoremReport report = verify_theorem1(ens);
      CHECK(report.pass);
      CHECK(std::abs(report.lhs - report.rhs) < 1e-9);
    }
    {
      Rng rng(seed + 1000000);
      const DiscreteEnsemble ens = random_collapse_ensemble(rng);
      const TheoremReport report = verify_theorem2(ens);
      CHECK(report.pass);
    }
    {
      Rng rng(seed + 2000000);
      const DiscreteEnsemble ens = random_noisy_ensemble(rng);
      const double i_rz = mutual_information(push_channel(ens));
      const double i_rx = mutual_information(joint_r_x(ens));
      CHECK(i_rz <= i_rx + 1e-9);
      CHECK(i_rz >= 0.0);
      CHECK(i_rz <= entropy(joint_r_z(ens).row_marginal()) + 1e-9);
      CHECK(i_rz <= entropy(joint_r_z(ens).col_marginal()) + 1e-9);
    }
  }
}

TEST_CASE("empirical_channel") {
  const std::vector<Seq> inputs{{0, 1, 1}, {0, 0, 1}};

  SUBCASE("a fixed-threshold resampler yields deterministic rows") {
    EmpiricalChannelConfig cfg;
    cfg.dim = 16;
    cfg.samples_per_input = 50;
    cfg.seed = 5;
    cfg.resampler = [](const FrameSequence& seq, Rng& rng) {
      return resample(seq, gram(seq), ThresholdParams::fixed(0.5), rng).codes;
    };
    const EmpiricalChannel channel = estimate_channel(inputs, cfg);
    for (const auto& row : channel.counts) {
      REQUIRE(row.size() == 1);
      CHECK(row[0].second == 50);
      CHECK(row[0].first == Seq{0, 1});  // phones recovered
    }
  }

  SUBCASE("counts always sum to the sample budget") {
    EmpiricalChannelConfig cfg;
    cfg.dim = 8;
    cfg.samples_per_input = 200;
    cfg.seed = 6;
    cfg.resampler = [](const FrameSequence& seq, Rng& rng) {
      return resample(seq, gram(seq), ThresholdParams::randomized(0.7, 1.1), rng).codes;
    };
    const EmpiricalChannel channel = estimate_channel(inputs, cfg);
    for (const auto& row : channel.counts) {
      int total = 0;
      for (const auto& [outcome, count] : row) total += count;
      CHECK(total == 200);
    }
  }

  SUBCASE("similarity resampling leaks less rhythm information than random resampling") {
    EmpiricalChannelConfig sim_cfg;
    sim_cfg.dim = 16;
    sim_cfg.samples_per_input = 2000;
    sim_cfg.seed = 11;
    sim_cfg.resampler = [](const FrameSequence& seq, Rng& rng) {
      return resample(seq, gram(seq), ThresholdParams::randomized(0.7, 1.1), rng).codes;
    };
    EmpiricalChannelConfig rr_cfg = sim_cfg;
    rr_cfg.resampler = [](const FrameSequence& seq, Rng& rng) {
      return rr_baseline(seq, rng).frames;
    };

    DiscreteEnsemble sim_ens = two_phone_ensemble(estimate_channel(inputs, sim_cfg).as_channel());
    DiscreteEnsemble rr_ens = two_phone_ensemble(estimate_channel(inputs, rr_cfg).as_channel());
    const double i_sim = mutual_information(push_channel(sim_ens));
    const double i_rr = mutual_information(push_channel(rr_ens));
    CHECK(i_sim < i_rr);
  }
}

TEST_CASE("ensemble validation") {
  SUBCASE("emit must be injective") {
    DiscreteEnsemble ens;
    ens.joint_sr.push_back({{0, 1}, {1, 1}, 0.5});
    ens.joint_sr.push_back({{0, 1}, {1, 1}, 0.5});  // duplicate pair
    ens.channel = identity_channel();
    CHECK_THROWS_AS(ens.validate(), InvalidPmf);
  }

  SUBCASE("probabilities must sum to one") {
    DiscreteEnsemble ens;
    ens.joint_sr.push_back({{0, 1}, {1, 1}, 0.4});
    ens.channel = identity_channel();
    CHECK_THROWS_AS(ens.validate(), InvalidPmf);
  }
}
