fn main() { println!("{}", manifold_core::placeholder()); }
