# Command modules are registered from pc_tsp.cli.__init__.py via their register(cli) functions.
