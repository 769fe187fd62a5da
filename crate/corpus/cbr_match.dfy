datatype Color = Red | Green | Blue

method Name(c: Color) returns (s: string)
{
  match c {
    case Red => s := "red";
    case Green => s := "green";
    case _ => s := "other";
  }
}

method Code(c: Color) returns (n: int)
{
  match c
  case Red => n := 1;
  case Green => n := 2;
  case Blue => n := 3;
}

method OnlyDefault(c: Color)
{
  match c {
    case _ => print "any\n";
  }
}
