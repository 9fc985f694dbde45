//! Convolution and dense primitives with explicit-loop forward and backward
//! passes. Gradients accumulate into caller-provided flat buffers so the
//! parameter order stays identical between checkpoints, Adam state and
//! gradient checks.

use rand::Rng;

/// 2D convolution, square kernel, stride 1. `same` pads by (k-1)/2,
/// otherwise the output shrinks to h-k+1.
#[derive(Debug, Clone)]
pub struct ConvLayer {
    pub out_c: usize,
    pub in_c: usize,
    pub k: usize,
    pub same: bool,
    /// Weights, shape [out_c][in_c][k][k], row-major.
    pub w: Vec<f32>,
    pub b: Vec<f32>,
}

impl ConvLayer {
    pub fn new<R: Rng>(out_c: usize, in_c: usize, k: usize, same: bool, rng: &mut R) -> ConvLayer {
        let fan_in = (in_c * k * k) as f32;
        let scale = (1.0 / fan_in).sqrt();
        let w = (0..out_c * in_c * k * k).map(|_| rng.random_range(-scale..scale)).collect();
        ConvLayer { out_c, in_c, k, same, w, b: vec![0.0; out_c] }
    }

    pub fn param_count(&self) -> usize {
        self.w.len() + self.b.len()
    }

    pub fn out_dims(&self, h: usize, w: usize) -> (usize, usize) {
        if self.same {
            (h, w)
        } else {
            (h - self.k + 1, w - self.k + 1)
        }
    }

    fn pad(&self) -> isize {
        if self.same {
            ((self.k - 1) / 2) as isize
        } else {
            0
        }
    }

    pub fn forward(&self, input: &[f32], h: usize, w: usize) -> Vec<f32> {
        let (oh, ow) = self.out_dims(h, w);
        let p = self.pad();
        let mut out = vec![0.0f32; self.out_c * oh * ow];
        for o in 0..self.out_c {
            let wo = o * self.in_c * self.k * self.k;
            for y in 0..oh {
                // Kernel rows that stay on the board, hoisted out of the
                // inner loops.
                let dy_lo = (p - y as isize).max(0) as usize;
                let dy_hi = (h as isize + p - y as isize).min(self.k as isize) as usize;
                for x in 0..ow {
                    let dx_lo = (p - x as isize).max(0) as usize;
                    let dx_hi = (w as isize + p - x as isize).min(self.k as isize) as usize;
                    let mut acc = self.b[o];
                    for i in 0..self.in_c {
                        let wi = wo + i * self.k * self.k;
                        let plane = i * h;
                        for dy in dy_lo..dy_hi {
                            let iy = (y as isize + dy as isize - p) as usize;
                            let row = (plane + iy) * w + x;
                            let wrow = wi + dy * self.k;
                            for dx in dx_lo..dx_hi {
                                acc += self.w[wrow + dx]
                                    * input[(row as isize + dx as isize - p) as usize];
                            }
                        }
                    }
                    out[(o * oh + y) * ow + x] = acc;
                }
            }
        }
        out
    }

    /// Backward pass: scatter gradients to weights, biases and the input.
    /// `gw`/`gb` are this layer's slices of the flat gradient buffer.
    pub fn backward(
        &self,
        input: &[f32],
        h: usize,
        w: usize,
        gout: &[f32],
        gw: &mut [f32],
        gb: &mut [f32],
        gin: &mut [f32],
    ) {
        let (oh, ow) = self.out_dims(h, w);
        let p = self.pad();
        for o in 0..self.out_c {
            let wo = o * self.in_c * self.k * self.k;
            for y in 0..oh {
                for x in 0..ow {
                    let g = gout[(o * oh + y) * ow + x];
                    if g == 0.0 {
                        continue;
                    }
                    gb[o] += g;
                    for i in 0..self.in_c {
                        let wi = wo + i * self.k * self.k;
                        for dy in 0..self.k {
                            let iy = y as isize + dy as isize - p;
                            if iy < 0 || iy >= h as isize {
                                continue;
                            }
                            for dx in 0..self.k {
                                let ix = x as isize + dx as isize - p;
                                if ix < 0 || ix >= w as isize {
                                    continue;
                                }
                                let ii = (i * h + iy as usize) * w + ix as usize;
                                gw[wi + dy * self.k + dx] += g * input[ii];
                                gin[ii] += g * self.w[wi + dy * self.k + dx];
                            }
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DenseLayer {
    pub out_n: usize,
    pub in_n: usize,
    /// Weights, shape [out_n][in_n], row-major.
    pub w: Vec<f32>,
    pub b: Vec<f32>,
}

impl DenseLayer {
    pub fn new<R: Rng>(out_n: usize, in_n: usize, rng: &mut R) -> DenseLayer {
        let scale = (1.0 / in_n as f32).sqrt();
        let w = (0..out_n * in_n).map(|_| rng.random_range(-scale..scale)).collect();
        DenseLayer { out_n, in_n, w, b: vec![0.0; out_n] }
    }

    pub fn param_count(&self) -> usize {
        self.w.len() + self.b.len()
    }

    pub fn forward(&self, input: &[f32]) -> Vec<f32> {
        let mut out = vec![0.0f32; self.out_n];
        for j in 0..self.out_n {
            let row = j * self.in_n;
            let mut acc = self.b[j];
            for i in 0..self.in_n {
                acc += self.w[row + i] * input[i];
            }
            out[j] = acc;
        }
        out
    }

    pub fn backward(
        &self,
        input: &[f32],
        gout: &[f32],
        gw: &mut [f32],
        gb: &mut [f32],
        gin: &mut [f32],
    ) {
        for j in 0..self.out_n {
            let g = gout[j];
            if g == 0.0 {
                continue;
            }
            gb[j] += g;
            let row = j * self.in_n;
            for i in 0..self.in_n {
                gw[row + i] += g * input[i];
                gin[i] += g * self.w[row + i];
            }
        }
    }
}

/// Residual block: y = x + relu(conv2(relu(conv1(relu(x))))), both
/// convolutions 3×3 same-padding with F filters.
#[derive(Debug, Clone)]
pub struct ResBlock {
    pub conv1: ConvLayer,
    pub conv2: ConvLayer,
}

impl ResBlock {
    pub fn new<R: Rng>(filters: usize, rng: &mut R) -> ResBlock {
        ResBlock {
            conv1: ConvLayer::new(filters, filters, 3, true, rng),
            conv2: ConvLayer::new(filters, filters, 3, true, rng),
        }
    }

    pub fn param_count(&self) -> usize {
        self.conv1.param_count() + self.conv2.param_count()
    }
}

pub fn relu(v: &[f32]) -> Vec<f32> {
    v.iter().map(|&x| if x > 0.0 { x } else { 0.0 }).collect()
}

/// Gradient of relu given the *post-activation* values.
pub fn relu_backward(gout: &[f32], post: &[f32]) -> Vec<f32> {
    gout.iter().zip(post).map(|(&g, &y)| if y > 0.0 { g } else { 0.0 }).collect()
}
