import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

import numpy as np

from synthesis import f2core
from synthesis.clifford import ElementaryFactor, elementary_matrix
from synthesis.circuit import Gate
from synthesis.codes import builtin, dumps_code
from synthesis.lcs import expected_images, target_from_gates


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, text):
        path = Path(self.tmp.name) / name
        path.write_text(text)
        return str(path)

    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, **options)
        return out.getvalue()

    def assertExitCode(self, expected_code, /, *args, **options):
        with self.assertRaises(CommandError) as caught:
            self.run_command(*args, **options)
        self.assertEqual(caught.exception.returncode, expected_code, str(caught.exception))
        return caught.exception


class SynthCommandTests(CommandTestCase):
    def test_prints_every_solution(self):
        out = self.run_command('synth', code='builtin:642', gates='CZ 1 2', mode='all')
        headers = [line for line in out.splitlines() if line.startswith('# solution')]
        self.assertEqual(len(headers), 8)
        self.assertTrue(headers[0].startswith('# solution 1 of 8 (index '))
        self.assertIn('two_qubit_count=', headers[0])

    def test_count_mode(self):
        out = self.run_command('synth', code='builtin:513', gates='P 1', mode='count')
        self.assertEqual(out, '1024\n')

    def test_avoid_metric(self):
        out = self.run_command('synth', code='builtin:422', gates='CZ 1 2', metric='avoid:1')
        first_header = out.splitlines()[0]
        touched = first_header.rsplit('qubits_touched=', 1)[1]
        self.assertNotIn('1', touched.split(','))

    def test_json_output(self):
        out = self.run_command('synth', code='builtin:642', gates='CZ 1 2', format='json')
        payload = json.loads(out)
        self.assertEqual(payload['code'], '[[6,4,2]]')
        self.assertEqual(payload['count'], 8)
        self.assertEqual(len(payload['solutions']), 8)
        solution = payload['solutions'][0]
        self.assertEqual(set(solution), {'index', 'matrix', 'decomposition', 'circuit', 'correction'})
        self.assertEqual(len(solution['matrix']), 12)
        self.assertEqual(solution['circuit']['m'], 6)

    def test_qasm_output(self):
        out = self.run_command('synth', code='builtin:422', gates='CZ 1 2', mode='first', format='qasm')
        lines = out.splitlines()
        self.assertTrue(lines[0].startswith('// solution 1 of 1'))
        self.assertEqual(lines[1], 'OPENQASM 2.0;')
        self.assertIn('qreg q[4];', lines)

    def test_missing_table_file(self):
        missing = str(Path(self.tmp.name) / 'none.table')
        self.assertExitCode(1, 'synth', code='builtin:422', table=missing)
        self.assertExitCode(1, 'verify', self.write('c.txt', 'CZ 2 3\n'), code='builtin:422', table=missing)

    def test_table_target(self):
        table = self.write('cz.table', 'X1 XZ\nX2 ZX\n')
        out = self.run_command('synth', code='builtin:422', table=table, mode='count')
        self.assertEqual(out, '8\n')

    def test_code_file(self):
        path = self.write('four.code', dumps_code(builtin('422')))
        out = self.run_command('synth', code=path, gates='H 1; H 2; SWAP 1 2', mode='count')
        self.assertEqual(out, '8\n')

    def test_output_file(self):
        target = str(Path(self.tmp.name) / 'out.txt')
        out = self.run_command('synth', code='builtin:211', gates='H 1', output=target)
        self.assertEqual(out, '')
        self.assertIn('# solution 1 of 2', Path(target).read_text())

    def test_workers_option(self):
        serial = self.run_command('synth', code='builtin:642', gates='CZ 1 2')
        parallel = self.run_command('synth', code='builtin:642', gates='CZ 1 2', workers=2)
        self.assertEqual(serial, parallel)

    def test_missing_target(self):
        self.assertExitCode(1, 'synth', code='builtin:642')

    def test_both_targets(self):
        table = self.write('cz.table', 'X1 XZ\n')
        self.assertExitCode(1, 'synth', code='builtin:422', gates='CZ 1 2', table=table)

    def test_bad_gate_text(self):
        self.assertExitCode(1, 'synth', code='builtin:642', gates='FOO 1')

    def test_bad_metric(self):
        self.assertExitCode(1, 'synth', code='builtin:642', gates='CZ 1 2', metric='fastest')

    def test_missing_code_file(self):
        self.assertExitCode(1, 'synth', code=str(Path(self.tmp.name) / 'none.code'), gates='H 1')

    def test_unknown_builtin(self):
        self.assertExitCode(2, 'synth', code='builtin:999', gates='H 1')

    def test_invalid_code_file(self):
        path = self.write('bad.code', '2 1\nstab ZZ\nlogx XX\nlogz ZZ\n')
        error = self.assertExitCode(2, 'synth', code=path, gates='H 1')
        self.assertIn('X1 and Z1', str(error))

    def test_inconsistent_target(self):
        table = self.write('bad.table', 'X1 ZI\n')
        self.assertExitCode(3, 'synth', code='builtin:422', table=table)

    def test_stabilizer_image_outside_group(self):
        table = self.write('bad.table', 'S1 XXII\n')
        self.assertExitCode(3, 'synth', code='builtin:422', table=table)

    def test_ceiling(self):
        self.assertExitCode(4, 'synth', code='builtin:642', gates='CZ 1 2', ceiling=4)

    @override_settings(LCS_SOLUTION_CEILING=4)
    def test_ceiling_from_settings(self):
        self.assertExitCode(4, 'synth', code='builtin:642', gates='CZ 1 2')

    def test_713_needs_count_mode(self):
        self.assertExitCode(4, 'synth', code='builtin:713', gates='H 1')
        self.assertEqual(self.run_command('synth', code='builtin:713', gates='H 1', mode='count'), '2097152\n')


class DecomposeCommandTests(CommandTestCase):
    def matrix_file(self, matrix):
        return self.write('f.txt', f2core.format_matrix(matrix))

    def test_graph_matrix(self):
        r = f2core.f2matrix([[0, 1], [1, 0]])
        path = self.matrix_file(elementary_matrix(ElementaryFactor.diagonal(r)))
        out = self.run_command('decompose', path)
        self.assertTrue(out.startswith('k = 2\n'))
        self.assertIn('R2:\n01\n10\n', out)
        self.assertTrue(out.endswith('circuit:\nCZ 1 2\n'))

    def test_json(self):
        path = self.matrix_file(f2core.identity(4))
        payload = json.loads(self.run_command('decompose', path, format='json'))
        self.assertEqual(payload['k'], 2)
        self.assertEqual(payload['q1'], ['10', '01'])
        self.assertEqual(payload['circuit']['gates'], [])

    def test_qasm(self):
        path = self.write('omega.txt', '0010\n0001\n1000\n0100\n')
        out = self.run_command('decompose', path, format='qasm')
        self.assertTrue(out.endswith('h q[0];\nh q[1];\n'))

    def test_not_symplectic(self):
        path = self.write('zero.txt', '00\n00\n')
        self.assertExitCode(2, 'decompose', path)

    def test_ragged_matrix(self):
        path = self.write('ragged.txt', '10\n1\n')
        self.assertExitCode(1, 'decompose', path)

    def test_missing_file(self):
        self.assertExitCode(1, 'decompose', str(Path(self.tmp.name) / 'none.txt'))


class VerifyCommandTests(CommandTestCase):
    def test_published_circuit(self):
        path = self.write('right.txt', 'CZ 2 3; CZ 2 4; CZ 3 4; Z 4\n')
        out = self.run_command('verify', path, code='builtin:422', gates='CZ 1 2')
        lines = out.splitlines()
        self.assertEqual(lines[-1], 'verified')
        self.assertEqual(len(lines), 7)
        self.assertTrue(lines[0].startswith('X1   XXII -> XXZZ expected XXZZ'))

    def test_sign_failure(self):
        path = self.write('unsigned.txt', 'CZ 2 3; CZ 2 4; CZ 3 4\n')
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('verify', path, code='builtin:422', gates='CZ 1 2', stdout=out)
        self.assertEqual(caught.exception.returncode, 5)
        self.assertIn('S1', str(caught.exception))
        self.assertIn('FAIL (sign)', out.getvalue())
        self.assertTrue(out.getvalue().endswith('not verified\n'))

    def test_empty_gate_list_means_identity(self):
        path = self.write('empty.txt', '# nothing\n')
        out = self.run_command('verify', path, code='builtin:422', gates='')
        self.assertTrue(out.endswith('verified\n'))

    def test_json_circuit_from_synth(self):
        payload = json.loads(self.run_command('synth', code='builtin:642', gates='CZ 1 2', format='json'))
        path = self.write('c.json', json.dumps(payload['solutions'][0]['circuit']))
        out = self.run_command('verify', path, code='builtin:642', gates='CZ 1 2')
        self.assertTrue(out.endswith('verified\n'))

    def test_bad_json(self):
        path = self.write('c.json', '{"m": 2, "gates": [{"kind": "H"}]}')
        self.assertExitCode(1, 'verify', path, code='builtin:422', gates='CZ 1 2')

    def test_stabilizer_table(self):
        circuit = self.write('p.txt', 'P 1; P 2; P 3; P 4\n')
        table = self.write('t.table', 'S1 YYYY\n')
        out = self.run_command('verify', circuit, code='builtin:422', table=table)
        self.assertTrue(out.endswith('verified\n'))


class SolveCommandTests(CommandTestCase):
    def test_enumerates(self):
        path = self.write('c.txt', '10 -> 10\n')
        out = self.run_command('solve', path)
        self.assertEqual(out.count('# solution'), 2)
        self.assertIn('# solution 1\n2\n', out)

    def test_count(self):
        path = self.write('c.txt', '# X1 fixed\n1000 -> 1000\n')
        self.assertEqual(self.run_command('solve', path, mode='count'), '48\n')

    def test_first(self):
        path = self.write('c.txt', '10 -> 01\n')
        self.assertEqual(self.run_command('solve', path, mode='first'), '# solution 1\n1\n2\n')

    def test_incompatible(self):
        path = self.write('c.txt', '1000 -> 1000\n0010 -> 0100\n')
        self.assertExitCode(3, 'solve', path)

    def test_dependent(self):
        path = self.write('c.txt', '1000 -> 1000\n1000 -> 0100\n')
        self.assertExitCode(3, 'solve', path)

    def test_ceiling(self):
        path = self.write('c.txt', '1000 -> 1000\n')
        self.assertExitCode(4, 'solve', path, ceiling=10)

    def test_malformed(self):
        path = self.write('c.txt', '10 01\n')
        self.assertExitCode(1, 'solve', path)


class CodesCommandTests(CommandTestCase):
    def test_lists_builtins(self):
        out = self.run_command('codes')
        self.assertEqual(len(out.splitlines()), 5)
        self.assertIn('642   [[6,4,2]]  m=6 k=4 r=2', out)

    def test_show(self):
        out = self.run_command('codes', show='422')
        self.assertEqual(out, '4 2\nstab XXXX\nstab ZZZZ\nlogx XXII\nlogx XIXI\nlogz IZIZ\nlogz IIZZ\n')

    def test_show_unknown(self):
        self.assertExitCode(2, 'codes', show='999')


class Code642CommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.code = builtin('642')
        self.target = target_from_gates(4, [Gate.of('CZ', 1, 2)])

    def test_decompose_graph_matrix(self):
        r = np.zeros((6, 6), dtype=np.uint8)
        for i, j in ((1, 2), (1, 5), (2, 5)):
            r[i, j] = r[j, i] = 1
        path = self.write('t_b.txt', f2core.format_matrix(elementary_matrix(ElementaryFactor.diagonal(r))))
        out = self.run_command('decompose', path)
        self.assertTrue(out.endswith('circuit:\nCZ 2 3\nCZ 2 6\nCZ 3 6\n'))

    def test_verify_final_circuit(self):
        path = self.write('final.txt', 'CZ 2 3; CZ 2 6; CZ 3 6; Z 6\n')
        out = self.run_command('verify', path, code='builtin:642', gates='CZ 1 2')
        self.assertTrue(out.endswith('\nverified\n'))

    def test_verify_without_sign_fix(self):
        path = self.write('unsigned.txt', 'CZ 2 3; CZ 2 6; CZ 3 6\n')
        error = self.assertExitCode(5, 'verify', path, code='builtin:642', gates='CZ 1 2')
        self.assertEqual(str(error), 'circuit fails on S1')

    def test_solve_raw_constraints(self):
        lines = [f'{f2core.format_bits(source.gamma())} -> {f2core.format_bits(image.gamma())}'
                 for _, source, image in expected_images(self.code, self.target)]
        path = self.write('cz.txt', '\n'.join(lines) + '\n')
        out = self.run_command('solve', path)
        self.assertEqual(out.count('# solution'), 8)
        self.assertEqual(self.run_command('solve', path, mode='count'), '8\n')

    def test_solve_fully_constrained(self):
        path = self.write('full.txt', '10 -> 01\n01 -> 10\n')
        self.assertEqual(self.run_command('solve', path), '# solution 1\n1\n2\n')

    def test_output_is_deterministic(self):
        first = self.run_command('synth', code='builtin:642', gates='CZ 1 2', format='json')
        second = self.run_command('synth', code='builtin:642', gates='CZ 1 2', format='json')
        self.assertEqual(first, second)
