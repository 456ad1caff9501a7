use rug::Integer;

use super::rational::mod_pos;
use crate::error::{invalid, Result};

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi_symbol(a: &Integer, n: &Integer) -> Result<i32> {
    if *n <= 0 || n.is_even() {
        return invalid(format!("Jacobi symbol needs an odd positive modulus, got {n}"));
    }
    let mut a = mod_pos(a, n);
    let mut n = n.clone();
    let mut sign = 1;
    while a != 0 {
        let twos = a.find_one(0).unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let n_mod_8 = n.mod_u(8);
            if twos % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_u(4) == 3 && n.mod_u(4) == 3 {
            sign = -sign;
        }
        a = mod_pos(&a, &n);
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Machine-integer convenience wrapper around [`jacobi_symbol`].
pub fn jacobi(a: i64, n: i64) -> Result<i32> {
    jacobi_symbol(&Integer::from(a), &Integer::from(n))
}
