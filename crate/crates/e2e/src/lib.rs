//! Independent transcriptions used by the acceptance run.

/// The n = 0, 1, 2 energy and superpotential expressions with ħ and m kept
/// explicit, written out separately from the library's general formulas.
pub struct Specialised {
    pub hbar: f64,
    pub m: f64,
    pub a: f64,
    pub d: f64,
    pub l: f64,
}

impl Specialised {
    fn nk(&self, k: u32) -> f64 {
        self.l + 1.0 + f64::from(k)
    }

    fn ll(&self) -> f64 {
        self.l * (self.l + 1.0)
    }

    pub fn e1(&self, k: u32) -> f64 {
        let nk = self.nk(k);
        -self.hbar.powi(2) * (3.0 * nk * nk - self.ll()) / (4.0 * self.m) * self.d.powi(2)
    }

    pub fn e2(&self, k: u32) -> f64 {
        let (h, m, a, d, nk, ll) = (self.hbar, self.m, self.a, self.d, self.nk(k), self.ll());
        let q = 5.0 * nk * nk - 3.0 * ll + 1.0;
        h.powi(4) * nk.powi(2) * q / (12.0 * a * m * m) * d.powi(3)
            - h.powi(6) * nk.powi(4) * q / (16.0 * a * a * m.powi(3)) * d.powi(4)
    }

    pub fn e3(&self, k: u32) -> f64 {
        let (h, m, a, d, nk, ll) = (self.hbar, self.m, self.a, self.d, self.nk(k), self.ll());
        let p = 5.0 * nk * nk - 3.0 * ll;
        let q = p + 1.0;
        let s = 9.0 * nk * nk - 5.0 * ll;
        -h.powi(6) * nk.powi(2) * p * q / (96.0 * a * a * m.powi(3)) * d.powi(4)
            + h.powi(8) * nk.powi(4) * q * s / (48.0 * a.powi(3) * m.powi(4)) * d.powi(5)
            - h.powi(10) * nk.powi(6) * q * s / (64.0 * a.powi(4) * m.powi(5)) * d.powi(6)
    }

    /// Superpotentials W, converted to the log-derivative scale √(2m)/ħ · W.
    pub fn w1(&self, k: u32, r: f64) -> f64 {
        let w = -self.hbar * self.nk(k) * self.d.powi(2) / (2.0 * (2.0 * self.m).sqrt()) * r;
        w * (2.0 * self.m).sqrt() / self.hbar
    }

    pub fn w2(&self, k: u32, r: f64) -> f64 {
        let (h, m, a, d) = (self.hbar, self.m, self.a, self.d);
        let (nk, next) = (self.nk(k), self.nk(k + 1));
        let w = -h * nk * (a * m * r + h * h * nk * next) * (3.0 * h * h * nk * nk * d - 4.0 * m * a) * d.powi(3)
            / (24.0 * (2.0 * m).sqrt() * (a * m).powi(2))
            * r;
        w * (2.0 * m).sqrt() / h
    }
}
