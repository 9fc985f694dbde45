//! Adapter exposing a value network (plus optional policy head) as a search
//! evaluator: states are encoded on the fly and priors come from a masked
//! softmax over the legal actions' policy logits.

use mxz_eval::ValueNetwork;
use mxz_games::encode::{encode, policy_index};
use mxz_games::{Encoding, GameState};
use mxz_search::{EvalError, Evaluator, LeafEval};
use rayon::prelude::*;

pub struct NetEvaluator {
    pub net: ValueNetwork,
    pub encoding: Encoding,
}

impl NetEvaluator {
    pub fn new(net: ValueNetwork, encoding: Encoding) -> NetEvaluator {
        NetEvaluator { net, encoding }
    }
}

impl Evaluator for NetEvaluator {
    fn bound(&self) -> f64 {
        self.net.spec.bound
    }

    fn has_policy(&self) -> bool {
        self.net.has_policy()
    }

    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError> {
        if !self.net.has_policy() {
            let tensors: Vec<_> = states.iter().map(|s| encode(s, self.encoding)).collect();
            let values =
                self.net.evaluate_batch(&tensors).map_err(|e| EvalError(e.to_string()))?;
            return Ok(values.into_iter().map(LeafEval::value).collect());
        }
        let eval_one = |state: &GameState| -> Result<LeafEval, EvalError> {
                let x = encode(state, self.encoding);
                let (value, logits) =
                    self.net.evaluate_with_policy(&x).map_err(|e| EvalError(e.to_string()))?;
                let logits = logits.expect("policy head present");
                let config = state.config();
                let legal = state.legal_actions();
                let gathered: Vec<f32> =
                    legal.iter().map(|&a| logits[policy_index(&config, a)]).collect();
                let max = gathered.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
                let exps: Vec<f64> = gathered.iter().map(|&z| f64::from(z - max).exp()).collect();
                let sum: f64 = exps.iter().sum();
                let priors = exps.into_iter().map(|e| e / sum).collect();
            Ok(LeafEval { value, priors: Some(priors) })
        };
        if states.len() >= 4 {
            states.par_iter().map(eval_one).collect()
        } else {
            states.iter().map(eval_one).collect()
        }
    }

    fn describe(&self) -> String {
        format!(
            "net(step={}, games={}{})",
            self.net.step,
            self.net.games_trained,
            if self.net.has_policy() { ", policy" } else { "" }
        )
    }
}
