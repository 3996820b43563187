"""Chain corpus: one `.ineq` file per group of related estimates."""
