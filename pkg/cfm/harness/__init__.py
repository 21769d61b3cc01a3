"""Runners behind the command line and the HTTP routes"""
from .bench import align, cmd_bench, compare_variants
from .metrics import compute_psnr
from .reproduce import FIGURES, cmd_reproduce, strongly_convex_quadratic
from .runner import cmd_solve, load_problem
from .testgen import cmd_testgen
from .writers import read_table, write_json, write_solution, write_table
