//! Network assembly, forward/backward passes and batch evaluation.

use crate::layers::{relu, relu_backward, ConvLayer, DenseLayer, ResBlock};
use crate::spec::{Architecture, NetworkSpec};
use crate::NetError;
use mxz_games::encode::FeatureTensor;
use mxz_games::GameId;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Policy head: a 1×1 convolution over the final spatial map producing
/// per-cell logits (one channel per move direction), plus a dense pass
/// logit for games that have a pass.
#[derive(Debug, Clone)]
pub struct PolicyHead {
    pub conv: ConvLayer,
    pub pass: Option<DenseLayer>,
    pub channels: usize,
}

#[derive(Debug, Clone)]
pub struct ValueNetwork {
    pub spec: NetworkSpec,
    /// C: stacked valid convolutions (ReLU each); R: one same convolution.
    trunk: Vec<ConvLayer>,
    blocks: Vec<ResBlock>,
    /// R1's trailing 1×1 convolution.
    post: Option<ConvLayer>,
    hidden: Vec<DenseLayer>,
    head: DenseLayer,
    policy: Option<PolicyHead>,
    /// Training step counter.
    pub step: u64,
    /// Self-play games this network has been trained on.
    pub games_trained: u64,
    /// Initialization seed (recorded in checkpoints).
    pub init_seed: u64,
    /// The terminal heuristic whose values this network regresses, when
    /// known; match play reads it back from checkpoints.
    pub heuristic: Option<mxz_games::TerminalHeuristic>,
    // Adam state, aligned with the flat parameter order.
    pub(crate) adam_m: Vec<f32>,
    pub(crate) adam_v: Vec<f32>,
    pub(crate) adam_t: u64,
}

/// Per-sample forward cache for backprop.
pub(crate) struct Fwd {
    trunk_ins: Vec<Vec<f32>>,
    /// Post-activation outputs of trunk convs (post-ReLU for C, raw for R).
    trunk_outs: Vec<Vec<f32>>,
    block_caches: Vec<BlockCache>,
    /// Input of the R1 1×1 convolution (last block output).
    post_in: Option<Vec<f32>>,
    /// Final spatial map: dense input and policy-conv input.
    pub spatial: Vec<f32>,
    hidden_ins: Vec<Vec<f32>>,
    hidden_outs: Vec<Vec<f32>>,
    head_in: Vec<f32>,
    tanh: f32,
    pub value: f32,
    /// Full policy logits in policy-index order, if the head exists.
    pub policy_logits: Option<Vec<f32>>,
}

struct BlockCache {
    a1: Vec<f32>,
    a2: Vec<f32>,
    a3: Vec<f32>,
}

impl ValueNetwork {
    pub fn new(spec: NetworkSpec, seed: u64) -> Result<ValueNetwork, NetError> {
        Self::build(spec, seed, None)
    }

    /// Network with a policy head for `game`. Requires an R architecture:
    /// the C network's valid convolutions shrink the spatial map away from
    /// the board, so per-cell logits have nowhere to live.
    pub fn with_policy(spec: NetworkSpec, seed: u64, game: GameId) -> Result<ValueNetwork, NetError> {
        if spec.architecture == Architecture::C {
            return Err(NetError::Config(
                "policy head requires a same-padding architecture (R1 or R2)".into(),
            ));
        }
        Ok(Self::build(spec, seed, Some(game))?)
    }

    fn build(spec: NetworkSpec, seed: u64, policy_game: Option<GameId>) -> Result<ValueNetwork, NetError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (planes, h, w) = spec.input;
        let f = spec.filters;
        let mut trunk = Vec::new();
        let mut blocks = Vec::new();
        let mut post = None;
        let (spatial_c, spatial_h, spatial_w);
        match spec.architecture {
            Architecture::C => {
                let mut in_c = planes;
                let (mut ch, mut cw) = (h, w);
                for _ in 0..spec.c_conv_layers() {
                    let conv = ConvLayer::new(f, in_c, 3, false, &mut rng);
                    let (nh, nw) = conv.out_dims(ch, cw);
                    trunk.push(conv);
                    in_c = f;
                    ch = nh;
                    cw = nw;
                }
                spatial_c = f;
                spatial_h = ch;
                spatial_w = cw;
            }
            Architecture::R1 | Architecture::R2 => {
                trunk.push(ConvLayer::new(f, planes, 3, true, &mut rng));
                for _ in 0..spec.architecture.residual_blocks() {
                    blocks.push(ResBlock::new(f, &mut rng));
                }
                if spec.architecture == Architecture::R1 {
                    post = Some(ConvLayer::new(f, f, 1, true, &mut rng));
                }
                spatial_c = f;
                spatial_h = h;
                spatial_w = w;
            }
        }
        let flat = spatial_c * spatial_h * spatial_w;
        let mut hidden = Vec::new();
        let mut in_n = flat;
        for _ in 0..spec.architecture.hidden_dense() {
            hidden.push(DenseLayer::new(spec.dense, in_n, &mut rng));
            in_n = spec.dense;
        }
        let head = DenseLayer::new(1, in_n, &mut rng);
        let policy = policy_game.map(|game| {
            let (channels, has_pass) = NetworkSpec::policy_layout(game);
            PolicyHead {
                conv: ConvLayer::new(channels, spatial_c, 1, true, &mut rng),
                pass: has_pass.then(|| DenseLayer::new(1, flat, &mut rng)),
                channels,
            }
        });
        let mut net = ValueNetwork {
            spec,
            trunk,
            blocks,
            post,
            hidden,
            head,
            policy,
            step: 0,
            games_trained: 0,
            init_seed: seed,
            heuristic: None,
            adam_m: Vec::new(),
            adam_v: Vec::new(),
            adam_t: 0,
        };
        let n = net.param_count();
        net.adam_m = vec![0.0; n];
        net.adam_v = vec![0.0; n];
        Ok(net)
    }

    pub fn has_policy(&self) -> bool {
        self.policy.is_some()
    }

    pub fn policy_game(&self) -> Option<GameId> {
        self.policy.as_ref().map(|p| match (p.channels, p.pass.is_some()) {
            (3, _) => GameId::Breakthrough,
            (_, true) => GameId::Othello,
            _ => GameId::Hex,
        })
    }

    /// Final spatial map dims (channels, h, w).
    fn spatial_dims(&self) -> (usize, usize, usize) {
        let (_, mut h, mut w) = self.spec.input;
        for conv in &self.trunk {
            let (nh, nw) = conv.out_dims(h, w);
            h = nh;
            w = nw;
        }
        (self.spec.filters, h, w)
    }

    // ----- parameter plumbing -------------------------------------------

    /// Layers in canonical order as (w-len, b-len) pairs: the layout of
    /// checkpoints, Adam state and flat gradients.
    fn layer_sizes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in &self.trunk {
            out.push((c.w.len(), c.b.len()));
        }
        for blk in &self.blocks {
            out.push((blk.conv1.w.len(), blk.conv1.b.len()));
            out.push((blk.conv2.w.len(), blk.conv2.b.len()));
        }
        if let Some(p) = &self.post {
            out.push((p.w.len(), p.b.len()));
        }
        for d in &self.hidden {
            out.push((d.w.len(), d.b.len()));
        }
        out.push((self.head.w.len(), self.head.b.len()));
        if let Some(p) = &self.policy {
            out.push((p.conv.w.len(), p.conv.b.len()));
            if let Some(pass) = &p.pass {
                out.push((pass.w.len(), pass.b.len()));
            }
        }
        out
    }

    /// Start offset of each layer's (w, b) pair in the flat vector.
    pub(crate) fn layer_offsets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cursor = 0;
        for (wl, bl) in self.layer_sizes() {
            out.push(cursor);
            cursor += wl + bl;
        }
        out
    }

    pub fn param_count(&self) -> usize {
        self.layer_sizes().iter().map(|(w, b)| w + b).sum()
    }

    fn tensors(&self) -> Vec<&[f32]> {
        let mut out: Vec<&[f32]> = Vec::new();
        for c in &self.trunk {
            out.push(&c.w);
            out.push(&c.b);
        }
        for blk in &self.blocks {
            out.push(&blk.conv1.w);
            out.push(&blk.conv1.b);
            out.push(&blk.conv2.w);
            out.push(&blk.conv2.b);
        }
        if let Some(p) = &self.post {
            out.push(&p.w);
            out.push(&p.b);
        }
        for d in &self.hidden {
            out.push(&d.w);
            out.push(&d.b);
        }
        out.push(&self.head.w);
        out.push(&self.head.b);
        if let Some(p) = &self.policy {
            out.push(&p.conv.w);
            out.push(&p.conv.b);
            if let Some(pass) = &p.pass {
                out.push(&pass.w);
                out.push(&pass.b);
            }
        }
        out
    }

    fn tensors_mut(&mut self) -> Vec<&mut Vec<f32>> {
        let mut out: Vec<&mut Vec<f32>> = Vec::new();
        for c in &mut self.trunk {
            out.push(&mut c.w);
            out.push(&mut c.b);
        }
        for blk in &mut self.blocks {
            out.push(&mut blk.conv1.w);
            out.push(&mut blk.conv1.b);
            out.push(&mut blk.conv2.w);
            out.push(&mut blk.conv2.b);
        }
        if let Some(p) = &mut self.post {
            out.push(&mut p.w);
            out.push(&mut p.b);
        }
        for d in &mut self.hidden {
            out.push(&mut d.w);
            out.push(&mut d.b);
        }
        out.push(&mut self.head.w);
        out.push(&mut self.head.b);
        if let Some(p) = &mut self.policy {
            out.push(&mut p.conv.w);
            out.push(&mut p.conv.b);
            if let Some(pass) = &mut p.pass {
                out.push(&mut pass.w);
                out.push(&mut pass.b);
            }
        }
        out
    }

    /// Parameters as one flat vector, layer-ordered, row-major.
    pub fn flat_params(&self) -> Vec<f32> {
        let mut out = Vec::with_capacity(self.param_count());
        for t in self.tensors() {
            out.extend_from_slice(t);
        }
        out
    }

    pub fn set_flat_params(&mut self, params: &[f32]) -> Result<(), NetError> {
        if params.len() != self.param_count() {
            return Err(NetError::Format(format!(
                "parameter count mismatch: expected {}, got {}",
                self.param_count(),
                params.len()
            )));
        }
        let mut cursor = 0;
        for t in self.tensors_mut() {
            let n = t.len();
            t.copy_from_slice(&params[cursor..cursor + n]);
            cursor += n;
        }
        Ok(())
    }

    // ----- forward ------------------------------------------------------

    pub fn check_shape(&self, x: &FeatureTensor) -> Result<(), NetError> {
        if x.shape() != self.spec.input {
            return Err(NetError::ShapeMismatch { expected: self.spec.input, got: x.shape() });
        }
        Ok(())
    }

    pub(crate) fn forward(&self, x: &[f32]) -> Fwd {
        let (_, h0, w0) = self.spec.input;
        let c_net = self.spec.architecture == Architecture::C;
        let mut trunk_ins = Vec::with_capacity(self.trunk.len());
        let mut trunk_outs = Vec::with_capacity(self.trunk.len());
        let mut act = x.to_vec();
        let (mut h, mut w) = (h0, w0);
        for conv in &self.trunk {
            trunk_ins.push(act.clone());
            let out = conv.forward(&act, h, w);
            let (nh, nw) = conv.out_dims(h, w);
            act = if c_net { relu(&out) } else { out };
            trunk_outs.push(act.clone());
            h = nh;
            w = nw;
        }
        let mut block_caches = Vec::with_capacity(self.blocks.len());
        for blk in &self.blocks {
            let input = act;
            let a1 = relu(&input);
            let c1 = blk.conv1.forward(&a1, h, w);
            let a2 = relu(&c1);
            let c2 = blk.conv2.forward(&a2, h, w);
            let a3 = relu(&c2);
            act = input.iter().zip(&a3).map(|(&s, &f)| s + f).collect();
            block_caches.push(BlockCache { a1, a2, a3 });
        }
        let mut post_in = None;
        if let Some(p) = &self.post {
            post_in = Some(act.clone());
            act = p.forward(&act, h, w);
        }
        let spatial = act;
        let mut hidden_ins = Vec::with_capacity(self.hidden.len());
        let mut hidden_outs = Vec::with_capacity(self.hidden.len());
        let mut dense_act = spatial.clone();
        for d in &self.hidden {
            hidden_ins.push(dense_act.clone());
            dense_act = relu(&d.forward(&dense_act));
            hidden_outs.push(dense_act.clone());
        }
        let head_in = dense_act;
        let z = self.head.forward(&head_in)[0];
        let t = z.tanh();
        let value = self.spec.bound as f32 * t;
        let policy_logits = self.policy.as_ref().map(|p| {
            let cells_out = p.conv.forward(&spatial, h, w);
            // Remap [channel][y][x] into policy-index order
            // (cell-major, channel minor), then append the pass logit.
            let cells = h * w;
            let mut logits = vec![0.0f32; cells * p.channels + usize::from(p.pass.is_some())];
            for ch in 0..p.channels {
                for cell in 0..cells {
                    logits[cell * p.channels + ch] = cells_out[ch * cells + cell];
                }
            }
            if let Some(pass) = &p.pass {
                let n = logits.len();
                logits[n - 1] = pass.forward(&spatial)[0];
            }
            logits
        });
        Fwd {
            trunk_ins,
            trunk_outs,
            block_caches,
            post_in,
            spatial,
            hidden_ins,
            hidden_outs,
            head_in,
            tanh: t,
            value,
            policy_logits,
        }
    }

    /// Evaluate one encoded state. `|result| <= L` structurally.
    pub fn evaluate(&self, x: &FeatureTensor) -> Result<f64, NetError> {
        self.check_shape(x)?;
        Ok(f64::from(self.forward(&x.data).value))
    }

    /// Order-preserving batch evaluation; identical results for any batch
    /// partitioning (each sample runs the same per-sample pass). Large
    /// batches fan out across threads.
    pub fn evaluate_batch(&self, xs: &[FeatureTensor]) -> Result<Vec<f64>, NetError> {
        for x in xs {
            self.check_shape(x)?;
        }
        if xs.len() >= 8 {
            Ok(xs.par_iter().map(|x| f64::from(self.forward(&x.data).value)).collect())
        } else {
            Ok(xs.iter().map(|x| f64::from(self.forward(&x.data).value)).collect())
        }
    }

    /// Full policy logits in policy-index order, if a head exists.
    pub fn policy_logits(&self, x: &FeatureTensor) -> Result<Option<Vec<f32>>, NetError> {
        self.check_shape(x)?;
        Ok(self.forward(&x.data).policy_logits)
    }

    /// Value and policy logits in one pass.
    pub fn evaluate_with_policy(&self, x: &FeatureTensor) -> Result<(f64, Option<Vec<f32>>), NetError> {
        self.check_shape(x)?;
        let fwd = self.forward(&x.data);
        Ok((f64::from(fwd.value), fwd.policy_logits))
    }

    /// Shadow forward pass in f64 over the same f32 parameters. Finite
    /// differences on the f32 loss surface drown in rounding noise, so
    /// gradient verification differentiates this numerically instead; it
    /// computes exactly the same function up to arithmetic precision.
    pub fn shadow_value_f64(&self, x: &FeatureTensor) -> Result<f64, NetError> {
        self.check_shape(x)?;
        let (_, h0, w0) = self.spec.input;
        let c_net = self.spec.architecture == Architecture::C;
        let mut act: Vec<f64> = x.data.iter().map(|&v| f64::from(v)).collect();
        let (mut h, mut w) = (h0, w0);
        for conv in &self.trunk {
            let out = conv_f64(conv, &act, h, w);
            let (nh, nw) = conv.out_dims(h, w);
            act = if c_net { out.iter().map(|&v| v.max(0.0)).collect() } else { out };
            h = nh;
            w = nw;
        }
        for blk in &self.blocks {
            let a1: Vec<f64> = act.iter().map(|&v| v.max(0.0)).collect();
            let c1 = conv_f64(&blk.conv1, &a1, h, w);
            let a2: Vec<f64> = c1.iter().map(|&v| v.max(0.0)).collect();
            let c2 = conv_f64(&blk.conv2, &a2, h, w);
            act = act.iter().zip(&c2).map(|(&s, &f)| s + f.max(0.0)).collect();
        }
        if let Some(p) = &self.post {
            act = conv_f64(p, &act, h, w);
        }
        for d in &self.hidden {
            act = dense_f64(d, &act).iter().map(|&v| v.max(0.0)).collect();
        }
        let z = dense_f64(&self.head, &act)[0];
        Ok(self.spec.bound * z.tanh())
    }

    // ----- backward -----------------------------------------------------

    /// Accumulate gradients for one sample into `grads` (flat, layer
    /// order). `dvalue` is dLoss/dvalue; `dlogits` is dLoss/dlogit in
    /// policy-index order when training the policy head.
    pub(crate) fn backward(
        &self,
        fwd: &Fwd,
        dvalue: f32,
        dlogits: Option<&[f32]>,
        grads: &mut [f32],
    ) {
        let offsets = self.layer_offsets();
        let sizes = self.layer_sizes();
        let mut layer = sizes.len();
        // Helper: split a layer's grad region into (w, b).
        macro_rules! wb {
            ($idx:expr) => {{
                let (wl, bl) = sizes[$idx];
                let start = offsets[$idx];
                let (gw, gb) = grads[start..start + wl + bl].split_at_mut(wl);
                (gw, gb)
            }};
        }

        let (sc, sh, sw) = self.spatial_dims();
        let mut gspatial = vec![0.0f32; sc * sh * sw];

        // Policy head (last layers in the canonical order).
        if let (Some(p), Some(dlogits)) = (&self.policy, dlogits) {
            let cells = sh * sw;
            if let Some(pass) = &p.pass {
                layer -= 1;
                let (gw, gb) = wb!(layer);
                let g = [dlogits[cells * p.channels]];
                pass.backward(&fwd.spatial, &g, gw, gb, &mut gspatial);
            }
            layer -= 1;
            let (gw, gb) = wb!(layer);
            // Un-remap logit grads into [channel][y][x].
            let mut gconv_out = vec![0.0f32; p.channels * cells];
            for ch in 0..p.channels {
                for cell in 0..cells {
                    gconv_out[ch * cells + cell] = dlogits[cell * p.channels + ch];
                }
            }
            p.conv.backward(&fwd.spatial, sh, sw, &gconv_out, gw, gb, &mut gspatial);
        } else if let Some(p) = &self.policy {
            layer -= 1 + usize::from(p.pass.is_some());
        }

        // Value head.
        let dz = dvalue * self.spec.bound as f32 * (1.0 - fwd.tanh * fwd.tanh);
        layer -= 1;
        let mut gdense = vec![0.0f32; fwd.head_in.len()];
        {
            let (gw, gb) = wb!(layer);
            self.head.backward(&fwd.head_in, &[dz], gw, gb, &mut gdense);
        }
        for (i, d) in self.hidden.iter().enumerate().rev() {
            let gpre = relu_backward(&gdense, &fwd.hidden_outs[i]);
            layer -= 1;
            let (gw, gb) = wb!(layer);
            let mut gin = vec![0.0f32; fwd.hidden_ins[i].len()];
            d.backward(&fwd.hidden_ins[i], &gpre, gw, gb, &mut gin);
            gdense = gin;
        }
        // Dense input is the flattened spatial map.
        for (a, b) in gspatial.iter_mut().zip(&gdense) {
            *a += b;
        }

        let mut gact = gspatial;
        if let Some(p) = &self.post {
            layer -= 1;
            let (gw, gb) = wb!(layer);
            let input = fwd.post_in.as_ref().expect("post conv cached");
            let mut gin = vec![0.0f32; input.len()];
            p.backward(input, sh, sw, &gact, gw, gb, &mut gin);
            gact = gin;
        }
        for (i, blk) in self.blocks.iter().enumerate().rev() {
            let cache = &fwd.block_caches[i];
            let dc2 = relu_backward(&gact, &cache.a3);
            layer -= 1;
            let (gw2, gb2) = wb!(layer);
            let mut ga2 = vec![0.0f32; cache.a2.len()];
            blk.conv2.backward(&cache.a2, sh, sw, &dc2, gw2, gb2, &mut ga2);
            let dc1 = relu_backward(&ga2, &cache.a2);
            layer -= 1;
            let (gw1, gb1) = wb!(layer);
            let mut ga1 = vec![0.0f32; cache.a1.len()];
            blk.conv1.backward(&cache.a1, sh, sw, &dc1, gw1, gb1, &mut ga1);
            let dskip = relu_backward(&ga1, &cache.a1);
            // y = x + f(x): the skip adds the incoming gradient unchanged.
            for (g, s) in gact.iter_mut().zip(&dskip) {
                *g += s;
            }
        }
        // Trunk convolutions in reverse, tracking spatial dims per stage.
        let (_, h0, w0) = self.spec.input;
        let c_net = self.spec.architecture == Architecture::C;
        let mut dims = Vec::with_capacity(self.trunk.len() + 1);
        let (mut h, mut w) = (h0, w0);
        for conv in &self.trunk {
            dims.push((h, w));
            let (nh, nw) = conv.out_dims(h, w);
            h = nh;
            w = nw;
        }
        for (i, conv) in self.trunk.iter().enumerate().rev() {
            let gpre = if c_net { relu_backward(&gact, &fwd.trunk_outs[i]) } else { gact.clone() };
            layer -= 1;
            let (gw, gb) = wb!(layer);
            let (ih, iw) = dims[i];
            let mut gin = vec![0.0f32; fwd.trunk_ins[i].len()];
            conv.backward(&fwd.trunk_ins[i], ih, iw, &gpre, gw, gb, &mut gin);
            gact = gin;
        }
        debug_assert_eq!(layer, 0, "all layers visited");
    }
}

fn conv_f64(conv: &ConvLayer, input: &[f64], h: usize, w: usize) -> Vec<f64> {
    let (oh, ow) = conv.out_dims(h, w);
    let p = if conv.same { ((conv.k - 1) / 2) as isize } else { 0 };
    let mut out = vec![0.0f64; conv.out_c * oh * ow];
    for o in 0..conv.out_c {
        let wo = o * conv.in_c * conv.k * conv.k;
        for y in 0..oh {
            for x in 0..ow {
                let mut acc = f64::from(conv.b[o]);
                for i in 0..conv.in_c {
                    let wi = wo + i * conv.k * conv.k;
                    for dy in 0..conv.k {
                        let iy = y as isize + dy as isize - p;
                        if iy < 0 || iy >= h as isize {
                            continue;
                        }
                        for dx in 0..conv.k {
                            let ix = x as isize + dx as isize - p;
                            if ix < 0 || ix >= w as isize {
                                continue;
                            }
                            acc += f64::from(conv.w[wi + dy * conv.k + dx])
                                * input[(i * h + iy as usize) * w + ix as usize];
                        }
                    }
                }
                out[(o * oh + y) * ow + x] = acc;
            }
        }
    }
    out
}

fn dense_f64(d: &DenseLayer, input: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0f64; d.out_n];
    for j in 0..d.out_n {
        let row = j * d.in_n;
        let mut acc = f64::from(d.b[j]);
        for i in 0..d.in_n {
            acc += f64::from(d.w[row + i]) * input[i];
        }
        out[j] = acc;
    }
    out
}
