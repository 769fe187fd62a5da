include "lib.dfy"

/* Constructs the tool passes through verbatim.
   /* nested comments are fine */ */
type Index = i: int | 0 <= i < 10
newtype Byte = x: int | 0 <= x < 256

ghost function Fib(n: nat): nat
{
  if n < 2 then n else Fib(n - 1) + Fib(n - 2)
}

lemma FibPositive(n: nat)
  requires n > 0
  ensures Fib(n) > 0
{
  if n > 2 {
    FibPositive(n - 1);
  }
}

iterator Gen(n: nat) yields (x: nat)
{
  var i := 0;
  while i < n { x := i; yield; i := i + 1; }
}

method Main()
{
  var xs := seq(5, i => i * i);
  assert |xs| == 5;
  assume {:axiom} xs[0] == 0;
  ghost var g := Fib(3);
  calc {
    Fib(2);
    ==
    Fib(1) + Fib(0);
  }
  var ys := set x | x in xs && x > 2;
  var f := (a: int) => a + 1;
  forall i | 0 <= i < 3 ensures true { }
  print xs, ys, f(2), "\n";
}
