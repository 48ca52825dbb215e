#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridrl/numerics/rng.hpp"
#include "gridrl/numerics/tape.hpp"
#include "gridrl/numerics/tensor.hpp"
#include "gridrl/policy/prompt.hpp"

namespace gridrl {

struct PolicyDims {
    int vocab = 64;
    int feat = 0;       // prompt feature width
    int cond = 64;      // prompt encoding size
    int emb = 32;       // token embedding size
    int hidden = 64;    // recurrent state size
    int pos = 8;        // sinusoidal position code size
    int seq_len = 64;   // T = h * w

    int input() const { return cond + emb + pos; }
    bool operator==(const PolicyDims&) const = default;
};

// Autoregressive categorical policy: prompt features -> conditioning vector,
// then a single gated recurrent core over (conditioning, previous-token
// embedding, position code) projecting to vocabulary logits each step.
// Start-of-sequence is a learned initial state; there is no reserved token.
struct PolicyParams {
    PolicyDims dims;
    Tensor w_prompt, b_prompt;   // [cond x feat], [cond]
    Tensor token_embed;          // [vocab x emb]
    Tensor w_update, b_update;   // [hidden x (hidden+input)], [hidden]
    Tensor w_reset, b_reset;
    Tensor w_cand, b_cand;
    Tensor w_out, b_out;         // [vocab x hidden], [vocab]
    Tensor h0;                   // [hidden]

    static constexpr int kTensorCount = 12;
    static const char* tensor_name(int i);

    static PolicyParams init(const PolicyDims& dims, Rng& rng, double init_std = 0.08);

    template <typename F>
    void visit(F&& fn) {
        fn(w_prompt); fn(b_prompt); fn(token_embed);
        fn(w_update); fn(b_update); fn(w_reset); fn(b_reset); fn(w_cand); fn(b_cand);
        fn(w_out); fn(b_out); fn(h0);
    }
    template <typename F>
    void visit(F&& fn) const {
        fn(w_prompt); fn(b_prompt); fn(token_embed);
        fn(w_update); fn(b_update); fn(w_reset); fn(b_reset); fn(w_cand); fn(b_cand);
        fn(w_out); fn(b_out); fn(h0);
    }

    long long param_count() const;
    bool all_finite() const;
};

// Sinusoidal position code for step t.
void position_code(int t, int dim, std::span<double> out);

// Tape-free step-by-step evaluator; reusable across rollouts.
class PolicyForward {
public:
    explicit PolicyForward(const PolicyParams& params);
    void reset(std::span<const double> cond_feat);
    // prev_token = -1 at t = 0. Writes vocabulary logits for step t.
    void step(int prev_token, int t, std::span<double> logits);

private:
    const PolicyParams* p_;
    std::vector<double> cond_enc_, h_, x_, hx_, gate_z_, gate_r_, rhx_, cand_, scratch_;
};

// One generated sequence with its sampling-time log-probabilities.
// logp_old is recorded from the temperature-1 distribution of the snapshot
// that generated the rollout; temperature only shapes sampling.
struct Rollout {
    PromptSpec prompt;
    std::vector<int> tokens;
    std::vector<double> logp_old;
    double temperature = 1.0;
};

struct SampleOptions {
    bool greedy = false;
    double cfg_scale = 1.0;  // 1.0 = no guidance
    // When set, receives the per-step entropy of the temperature-scaled
    // sampling distribution.
    std::vector<double>* sample_entropy = nullptr;
};

// Logits for the next position given a prefix (causal by construction).
Tensor forward_logits(const PolicyParams& params, std::span<const double> cond_feat,
                      std::span<const int> prefix);

Rollout sample_rollout(const PolicyParams& params, const PromptSpec& spec, const GridShape& grid,
                       int categories, double temperature, Rng& rng,
                       const SampleOptions& opts = {});

// Teacher-forced per-position quantities under the given parameters.
struct TeacherForcedEval {
    std::vector<double> logp;       // T: log p(token_t | prefix)
    std::vector<double> entropy;    // T: full-distribution entropy, temperature 1
    std::vector<double> logp_full;  // T*V row-major log-distributions
};
TeacherForcedEval teacher_forced_eval(const PolicyParams& params, std::span<const double> cond_feat,
                                      std::span<const int> tokens);

std::vector<double> teacher_forced_logprobs(const PolicyParams& params, const Rollout& r,
                                            const GridShape& grid, int categories);
std::vector<double> token_entropies(const PolicyParams& params, const Rollout& r,
                                    const GridShape& grid, int categories);
double sequence_entropy(const PolicyParams& params, const Rollout& r, const GridShape& grid,
                        int categories);

// --- differentiable path -------------------------------------------------

struct PolicyLeaves {
    Tape::Id w_prompt, b_prompt, token_embed;
    Tape::Id w_update, b_update, w_reset, b_reset, w_cand, b_cand;
    Tape::Id w_out, b_out, h0;

    std::array<Tape::Id, PolicyParams::kTensorCount> ordered() const {
        return {w_prompt, b_prompt, token_embed, w_update, b_update, w_reset,
                b_reset, w_cand, b_cand, w_out, b_out, h0};
    }
};

PolicyLeaves make_policy_leaves(Tape& tape, const PolicyParams& params, bool requires_grad);

// Teacher-forced unroll on the tape; mirrors PolicyForward op for op.
struct TapeTeacherForced {
    std::vector<Tape::Id> logp_rows;   // per t: log-softmax over V
    std::vector<Tape::Id> prob_rows;   // per t: exp(logp), present iff with_entropy
    std::vector<Tape::Id> logp_token;  // per t: scalar log p(token_t)
    std::vector<Tape::Id> entropy;     // per t: scalar, present iff with_entropy
};
TapeTeacherForced teacher_forced_tape(Tape& tape, const PolicyLeaves& leaves,
                                      const PolicyDims& dims, std::span<const double> cond_feat,
                                      std::span<const int> tokens, bool with_entropy);

// Gradient accumulation buffers aligned with PolicyParams::visit order.
std::vector<Tensor> zero_grads_like(const PolicyParams& params);
void accumulate_leaf_grads(std::vector<Tensor>& grads, const Tape& tape,
                           const PolicyLeaves& leaves);

}  // namespace gridrl
