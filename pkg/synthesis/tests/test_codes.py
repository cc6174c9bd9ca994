import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from synthesis import codes
from synthesis.codes import StabilizerCode, builtin, dumps_code, in_stabilizer, loads_code, validate
from synthesis.pauli import parse_pauli


def code_from(stabilizers, logical_x, logical_z, k=None):
    stabs = [parse_pauli(s) for s in stabilizers]
    xs = [parse_pauli(s) for s in logical_x]
    zs = [parse_pauli(s) for s in logical_z]
    m = (stabs or xs)[0].m
    return StabilizerCode(m, len(xs) if k is None else k, stabs, xs, zs)


class BuiltinTests(SimpleTestCase):
    def test_every_builtin_is_valid(self):
        for name in codes.BUILTINS:
            self.assertEqual(validate(builtin(name)), [], name)

    def test_parameters(self):
        expected = {'211': (2, 1), '422': (4, 2), '513': (5, 1), '642': (6, 4), '713': (7, 1)}
        for name, (m, k) in expected.items():
            code = builtin(name)
            self.assertEqual((code.m, code.k, code.r), (m, k, m - k), name)

    def test_642_logicals(self):
        code = builtin('builtin:642')
        self.assertEqual([str(x) for x in code.logical_x], ['XXIIII', 'XIXIII', 'XIIXII', 'XIIIXI'])
        self.assertEqual([str(z) for z in code.logical_z], ['IZIIIZ', 'IIZIIZ', 'IIIZIZ', 'IIIIZZ'])
        self.assertEqual([str(s) for s in code.stabilizers], ['XXXXXX', 'ZZZZZZ'])

    def test_422_logicals(self):
        code = builtin('422')
        self.assertEqual([str(x) for x in code.logical_x], ['XXII', 'XIXI'])
        self.assertEqual([str(z) for z in code.logical_z], ['IZIZ', 'IIZZ'])

    def test_unknown(self):
        with self.assertRaises(codes.UnknownCode):
            builtin('999')

    def test_name_is_the_parameter_string(self):
        self.assertEqual(str(builtin('513')), '[[5,1,3]]')


class ValidateTests(SimpleTestCase):
    def kinds(self, code):
        return [(v.kind, v.items) for v in validate(code)]

    def test_logical_x_anticommutes_with_stabilizer(self):
        code = code_from(['XXXX', 'ZZZZ'], ['XIII', 'XIXI'], ['IZIZ', 'IIZZ'])
        self.assertIn(('logical-anticommutes', ('X1', 'S2')), self.kinds(code))

    def test_logical_pair_commutes(self):
        code = code_from(['ZZ'], ['XX'], ['ZZ'])
        found = self.kinds(code)
        self.assertIn(('logical-pairing', ('X1', 'Z1')), found)

    def test_anticommuting_stabilizers(self):
        code = code_from(['XI', 'ZI'], [], [], k=0)
        self.assertIn(('anticommuting-stabilizers', ('S1', 'S2')), self.kinds(code))

    def test_dependent_stabilizers(self):
        code = code_from(['ZZI', 'IZZ', 'ZIZ'], [], [], k=0)
        self.assertIn('dependent-stabilizers', [v.kind for v in validate(code)])

    def test_wrong_counts(self):
        code = code_from(['ZZ'], [], [], k=1)
        self.assertEqual([v.kind for v in validate(code)], ['size'])

    def test_non_hermitian_operator(self):
        code = code_from(['iZZ'], ['XX'], ['ZI'])
        self.assertEqual(self.kinds(code), [('phase', ('S1',))])

    def test_mixed_sizes(self):
        code = code_from(['ZZ'], ['XXX'], ['ZI'])
        self.assertEqual(self.kinds(code)[0], ('size', ('X1',)))

    def test_checked_raises_with_violations(self):
        code = code_from(['ZZ'], ['XX'], ['ZZ'])
        with self.assertRaises(codes.InvalidCode) as caught:
            codes.checked(code)
        self.assertTrue(caught.exception.violations)
        self.assertIn('X1 and Z1', str(caught.exception))


class StabilizerGroupTests(SimpleTestCase):
    def test_membership(self):
        code = builtin('422')
        self.assertTrue(in_stabilizer(code, parse_pauli('XXXX')))
        self.assertTrue(in_stabilizer(code, parse_pauli('YYYY')))
        self.assertFalse(in_stabilizer(code, parse_pauli('-YYYY')))
        self.assertFalse(in_stabilizer(code, parse_pauli('XXII')))

    def test_identity_is_always_a_member(self):
        self.assertTrue(in_stabilizer(builtin('513'), parse_pauli('IIIII')))

    def test_element_exponents(self):
        exponents, element = codes.stabilizer_element(builtin('422'), parse_pauli('-YYYY'))
        self.assertEqual(exponents, (1, 1))
        self.assertEqual(element, parse_pauli('YYYY'))


class CodeFileTests(SimpleTestCase):
    def test_dump_and_load(self):
        code = builtin('642')
        loaded = loads_code(dumps_code(code))
        self.assertEqual((loaded.m, loaded.k), (6, 4))
        self.assertEqual(loaded.stabilizers, code.stabilizers)
        self.assertEqual(loaded.logical_x, code.logical_x)
        self.assertEqual(loaded.logical_z, code.logical_z)

    def test_comments_and_blank_lines(self):
        text = '# repetition code\n2 1\n\nstab ZZ   # parity\nlogx XX\nlogz ZI\n'
        self.assertEqual(validate(loads_code(text)), [])

    def test_missing_header(self):
        with self.assertRaises(codes.InvalidCodeFile):
            loads_code('stab ZZ\n')
        with self.assertRaises(codes.InvalidCodeFile):
            loads_code('')

    def test_bad_line(self):
        with self.assertRaises(codes.InvalidCodeFile):
            loads_code('2 1\nstabilizer ZZ\n')
        with self.assertRaises(codes.InvalidCodeFile):
            loads_code('2 1\nstab ZQ\n')

    def test_resolve_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'rep.code'
            path.write_text(dumps_code(builtin('211')))
            code = codes.resolve(str(path))
            self.assertEqual(code.name, 'rep')
            self.assertEqual(code.m, 2)

    def test_resolve_rejects_invalid_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.code'
            path.write_text('2 1\nstab ZZ\nlogx XX\nlogz ZZ\n')
            with self.assertRaises(codes.InvalidCode):
                codes.resolve(str(path))

    def test_missing_file(self):
        with self.assertRaises(codes.InvalidCodeFile):
            codes.load_code('/nonexistent/dir/none.code')

    def test_resolve_builtin(self):
        self.assertEqual(codes.resolve('builtin:211').k, 1)
