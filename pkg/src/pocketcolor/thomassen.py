def thomassen_extend(G, L, P, phi):
    return None  # placeholder until implemented
