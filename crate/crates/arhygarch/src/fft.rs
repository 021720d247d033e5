//! FFT-backed causal convolution for the likelihood filter.

use std::sync::Arc;

use arhygarch_core::inference::LagConvolver;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Zero-padded FFT convolution, `O(T log T)` per call.
///
/// The transform of the most recent signal is cached, so repeated calls on
/// one series (the estimation loop) cost one forward and one inverse FFT.
pub struct FftConvolver {
    planner: FftPlanner<f64>,
    size: usize,
    forward: Option<Arc<dyn Fft<f64>>>,
    inverse: Option<Arc<dyn Fft<f64>>>,
    signal: Vec<f64>,
    signal_hat: Vec<Complex64>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Default for FftConvolver {
    fn default() -> Self {
        Self::new()
    }
}

impl FftConvolver {
    pub fn new() -> Self {
        Self {
            planner: FftPlanner::new(),
            size: 0,
            forward: None,
            inverse: None,
            signal: Vec::new(),
            signal_hat: Vec::new(),
            buf: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn prepare(&mut self, size: usize) {
        if self.size == size {
            return;
        }
        let forward = self.planner.plan_fft_forward(size);
        let inverse = self.planner.plan_fft_inverse(size);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        self.scratch = vec![Complex64::default(); scratch_len];
        self.forward = Some(forward);
        self.inverse = Some(inverse);
        self.size = size;
        self.signal.clear();
    }
}

impl LagConvolver for FftConvolver {
    fn causal_convolve(&mut self, weights: &[f64], signal: &[f64], out: &mut [f64]) {
        let n = signal.len();
        if n == 0 || weights.is_empty() {
            out.iter_mut().for_each(|o| *o = 0.0);
            return;
        }
        let width = weights.len().min(n);
        self.prepare((n + width - 1).next_power_of_two());
        let size = self.size;
        let forward = self.forward.clone().expect("planned");
        let inverse = self.inverse.clone().expect("planned");

        if self.signal.as_slice() != signal {
            self.signal.clear();
            self.signal.extend_from_slice(signal);
            self.signal_hat.clear();
            self.signal_hat.extend(signal.iter().map(|v| Complex64::new(*v, 0.0)));
            self.signal_hat.resize(size, Complex64::default());
            forward.process_with_scratch(&mut self.signal_hat, &mut self.scratch);
        }

        self.buf.clear();
        self.buf.extend(weights[..width].iter().map(|v| Complex64::new(*v, 0.0)));
        self.buf.resize(size, Complex64::default());
        forward.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (b, s) in self.buf.iter_mut().zip(&self.signal_hat) {
            *b *= s;
        }
        inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
        let scale = 1.0 / size as f64;
        for (o, b) in out.iter_mut().zip(&self.buf) {
            *o = b.re * scale;
        }
    }
}
