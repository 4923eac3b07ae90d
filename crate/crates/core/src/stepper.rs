use crate::vec3::Vec3;

/// Scratch buffers for classical RK4 on a vector field.
pub(crate) struct FieldRk4 {
    k1: Vec<Vec3>,
    k2: Vec<Vec3>,
    k3: Vec<Vec3>,
    k4: Vec<Vec3>,
    stage: Vec<Vec3>,
}

impl FieldRk4 {
    pub(crate) fn new(len: usize) -> Self {
        FieldRk4 {
            k1: vec![Vec3::ZERO; len],
            k2: vec![Vec3::ZERO; len],
            k3: vec![Vec3::ZERO; len],
            k4: vec![Vec3::ZERO; len],
            stage: vec![Vec3::ZERO; len],
        }
    }

    /// Advances `state` from `t` to `t + dt`; `rhs(state, t, out)` writes the derivative.
    pub(crate) fn step<F>(&mut self, state: &mut [Vec3], t: f64, dt: f64, mut rhs: F)
    where
        F: FnMut(&[Vec3], f64, &mut [Vec3]),
    {
        let half = 0.5 * dt;
        rhs(state, t, &mut self.k1);
        axpy(&mut self.stage, state, half, &self.k1);
        rhs(&self.stage, t + half, &mut self.k2);
        axpy(&mut self.stage, state, half, &self.k2);
        rhs(&self.stage, t + half, &mut self.k3);
        axpy(&mut self.stage, state, dt, &self.k3);
        rhs(&self.stage, t + dt, &mut self.k4);
        let w = dt / 6.0;
        for (j, m) in state.iter_mut().enumerate() {
            let incr = self.k1[j] + (self.k2[j] + self.k3[j]) * 2.0 + self.k4[j];
            *m += incr * w;
        }
    }
}

#[inline]
fn axpy(out: &mut [Vec3], x: &[Vec3], a: f64, d: &[Vec3]) {
    for ((o, x), d) in out.iter_mut().zip(x).zip(d) {
        *o = *x + *d * a;
    }
}
