// Placeholder bench; filled in once the experiment runner lands.
fn main() {}
