""" Bundled scenario presets (`*.json`), loaded by name through `awnbench.bench.load_config`. """
