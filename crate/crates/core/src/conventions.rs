//! Phase, sign and ordering conventions shared by every module.
//!
//! Bump [`CONVENTIONS_VERSION`] whenever one of the formulas below changes;
//! run manifests record it.
//!
//! # Labels and fiducials
//!
//! Oscillator: `|z⟩ = D(z)|0⟩`, `D(z) = exp(z a† − z* a)`, so
//! `⟨n|z⟩ = e^{−|z|²/2} zⁿ/√n!` and `⟨0|z⟩ > 0`.
//!
//! Spin: `|z⟩ = D(z)|J,−J⟩` with `D(z) = exp[(atan|z|/|z|)(z J₊ − z* J₋)]`,
//! so `⟨J,−J+k|z⟩ = (1+|z|²)^{−J} z^k √C(2J,k)` and `⟨J,−J|z⟩ > 0`.
//! `|z| → ∞` reaches `|J,+J⟩`.
//!
//! Fiducial-`n` states are `|n⟩` and `|J,−J+n⟩`; the doorway uses `n = 1`.
//!
//! # Overlaps
//!
//! - oscillator: `⟨z₁|z₂⟩ = exp(−|z₁|²/2 − |z₂|²/2 + z₁* z₂)`
//! - spin: `⟨z₁|z₂⟩ = [(1 + z₁* z₂)/√((1+|z₁|²)(1+|z₂|²))]^{2J}`
//!
//! The squared moduli are `exp(−|z₁−z₂|²)` and
//! `(1 − |z₁−z₂|²/((1+|z₁|²)(1+|z₂|²)))^{2J}`; the mean-field distance `d`
//! is minus the logarithm of the squared modulus.
//!
//! # Expectations
//!
//! - oscillator: `⟨a†a⟩ = |z|²`, `⟨a†⟩ = z*`, `⟨a⟩ = z`
//! - spin: `⟨J_z⟩ = −J(1−|z|²)/(1+|z|²)`, `⟨J₊⟩ = 2J z*/(1+|z|²)`,
//!   `⟨J₋⟩ = 2J z/(1+|z|²)`
//!
//! # Displacement relations `D†A_iD = Σ_k g_ik A_k + k_i`
//!
//! Rows ordered `(A₀, A₊, A₋)`, `n = 1 + |z|²`:
//!
//! | group | row | g | k |
//! |---|---|---|---|
//! | h(3) | a†a | (1, z, z*) | \|z\|² |
//! | h(3) | a† | (0, 1, 0) | z* |
//! | h(3) | a | (0, 0, 1) | z |
//! | su(2) | J_z | ((1−\|z\|²)/n, z/n, z*/n) | 0 |
//! | su(2) | J₊ | (−2z*/n, 1/n, −z*²/n) | 0 |
//! | su(2) | J₋ | (−2z/n, −z²/n, 1/n) | 0 |
//!
//! # Label equations of motion
//!
//! With `h = c₀A₀ + c₊A₊ + c₋A₋` the mean-field generator of one degree:
//! oscillator `ż = −i c₀ z − i c₊`, spin `ż = −i c₊ − i c₀ z + i c₊* z²`.
//!
//! # Generalized actions
//!
//! `η̇⁽ⁿ⁾ = ⟨n|D†(i∂_t − h)D|n⟩`, so that `e^{iη⁽ⁿ⁾}D(z(t))|n⟩` solves the
//! mean-field Schrödinger equation:
//!
//! - oscillator: `η̇⁽ⁿ⁾ = −Im(z* ż) − [c₀(|z|² + n) + c₊ z* + c₋ z]`
//! - spin, weight `m = −J + n`:
//!   `η̇⁽ⁿ⁾ = 2m Im(z* ż)/(1+|z|²) − m[c₀(1−|z|²) − 2c₊ z* − 2c₋ z]/(1+|z|²)`
//!
//! `S₀ = η_x⁽⁰⁾ + η_y⁽⁰⁾` and `S₁ = η_x⁽¹⁾ + η_y⁽¹⁾`. The constant terms
//! `f_A`, `f_B` of the mean-field Hamiltonian are never included.
//!
//! # First-order kernel
//!
//! `c(t) = σ e^{i(S₀−S₁)(t)} Σ_ij γ_ij g^A_{i+}(x) g^B_{j+}(y)` with
//! `σ = ‖A₊|0⟩‖·‖B₊|0⟩‖` (`= √(2J)` for h(3) ⊗ su(2)); `g_{i+}` is the `A₊`
//! column of row `i`. For the maser with coupling `G/√(κJ)` this is
//! `√(2/κ) e^{i(S₀−S₁)} (G′ − G y²)/(1+|y|²)`.
//!
//! # Oracle basis
//!
//! Product basis `|n⟩ ⊗ |J,−J+k⟩`, flat index `n·(2J+1) + k` (spin fastest).
pub const CONVENTIONS_VERSION: &str = "1";
