use num_complex::Complex64;

/// Scratch space for classical fourth-order Runge–Kutta on a complex state.
pub(crate) struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    pub(crate) fn new(len: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); len];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// Advances `y` by one step of size `h` for the autonomous system y' = f(y).
    pub(crate) fn step<F>(&mut self, y: &mut [Complex64], h: f64, mut f: F)
    where
        F: FnMut(&[Complex64], &mut [Complex64]),
    {
        let half = 0.5 * h;
        f(y, &mut self.k1);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *t = y + k * half;
        }
        f(&self.tmp, &mut self.k2);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *t = y + k * half;
        }
        f(&self.tmp, &mut self.k3);
        for ((t, y), k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *t = y + k * h;
        }
        f(&self.tmp, &mut self.k4);
        let sixth = h / 6.0;
        for (i, y) in y.iter_mut().enumerate() {
            *y += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

/// Number of equal steps covering `t_final` with step at most `dt`.
pub(crate) fn step_count(t_final: f64, dt: f64) -> usize {
    if t_final <= 0.0 {
        return 0;
    }
    ((t_final / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}
