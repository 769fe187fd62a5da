method Literals(x: int, f: real, ok: bool) returns (r: int, g: real, c: char, s: string)
{
  r := 10;
  r := 0;
  r := -5;
  g := 2.5;
  g := f * 2.0;
  c := 'a';
  c := 'z';
  s := "hello";
  s := "";
  var flag := true;
  flag := ok;
  r := x + 1;
  print flag, "\n";
}
