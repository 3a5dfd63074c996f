"""Life-span bounds and blow-up simulation for u_t = Δu + |x|^l |u|^α u."""
